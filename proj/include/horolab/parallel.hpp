#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace horolab {

/// Fixed-size set of workers handed down from the front end.
///
/// Modules never spawn threads themselves; they receive a pool and call
/// parallel_for. Work items are indices, and each item must only write to
/// its own output slot, so results never depend on the thread count.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned threads = 1);

  unsigned threads() const { return threads_; }

  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t)>& fn) const;

 private:
  unsigned threads_;
};

/// Shared single-threaded pool used as a default argument.
const WorkerPool& serial_pool();

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Chunk size for deterministic reductions. Chunk boundaries depend only on
/// the index range, never on the number of workers.
inline constexpr std::size_t kReductionChunk = 2048;

/// Sum term(i) for i in [0, count) with compensated accumulation inside
/// fixed-size chunks and an in-order compensated merge of chunk partials.
template <class Term>
std::complex<double> deterministic_sum(const WorkerPool& pool, std::size_t count,
                                       Term&& term) {
  const std::size_t chunks = (count + kReductionChunk - 1) / kReductionChunk;
  std::vector<std::complex<double>> partial(chunks);
  pool.parallel_for(chunks, [&](std::size_t c) {
    CompensatedComplexSum acc;
    const std::size_t lo = c * kReductionChunk;
    const std::size_t hi = std::min(count, lo + kReductionChunk);
    for (std::size_t i = lo; i < hi; ++i) acc.add(std::complex<double>(term(i)));
    partial[c] = acc.value();
  });
  CompensatedComplexSum total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

}  // namespace horolab
