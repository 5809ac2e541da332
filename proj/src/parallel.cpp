#include "horolab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace horolab {

WorkerPool::WorkerPool(unsigned threads) : threads_(std::max(1u, threads)) {}

void WorkerPool::parallel_for(std::size_t count,
                              const std::function<void(std::size_t)>& fn) const {
  if (count == 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads_, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  std::vector<std::jthread> crew;
  crew.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) crew.emplace_back(body);
  body();
  crew.clear();
  if (failure) std::rethrow_exception(failure);
}

const WorkerPool& serial_pool() {
  static const WorkerPool pool(1);
  return pool;
}

}  // namespace horolab
