#pragma once

// Discrete and continuous low-lying horocycles on X and X x X, their Weyl
// sums and discrepancy statistics.

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "horolab/arith.hpp"
#include "horolab/heckeforms.hpp"
#include "horolab/parallel.hpp"

namespace horolab {

enum class HoroKind { discrete_single, discrete_pair, discrete_tuple, monomial };

/// count() tuples of dim() points each, stored row-major.
struct HoroPointSet {
  HoroKind kind = HoroKind::discrete_single;
  i64 q = 0;
  std::vector<i64> shifts;  // b, or b_1..b_d
  std::size_t dim = 1;
  std::vector<HalfPlanePoint> points;

  std::size_t count() const { return points.size() / dim; }
  const HalfPlanePoint& at(std::size_t i, std::size_t j) const { return points[i * dim + j]; }
};

/// (a + i)/q for a = 0..q-1.
HoroPointSet hecke_points(i64 q);

/// ((a + i)/q, (ab + i)/q), with ab reduced mod q.
HoroPointSet pair_points(i64 q, i64 b);

struct TuplePoints {
  HoroPointSet set;
  i64 s_squared = 0;  // min over i != j of s(q; b_i / b_j)^2
  double s() const { return std::sqrt(static_cast<double>(s_squared)); }
};

TuplePoints tuple_points(i64 q, const std::vector<i64>& b);

/// ((a^k + i)/q, (b a^l + i)/q); requires 1 <= k < l.
HoroPointSet monomial_points(int k, int l, i64 q, i64 b);

struct WeylReport {
  i64 q = 0;
  std::vector<i64> b;
  double s = 0.0;
  std::complex<double> value;
  double target = 0.0;
  double abs_error = 0.0;
  double seconds = 0.0;
};

/// (1/|H|) sum over tuples of prod_j phi_j(z_j); one test function per
/// coordinate. target is the product of the means.
WeylReport weyl_sum(const HoroPointSet& points, const std::vector<TestFunction>& phi,
                    const WorkerPool& pool = serial_pool());

WeylReport weyl_sum(const HoroPointSet& points, const TestFunction& phi1, const TestFunction& phi2,
                    const WorkerPool& pool = serial_pool());

struct Rational {
  i64 num = 0;
  i64 den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

using AutomorphicFn = std::function<std::complex<double>(HalfPlanePoint)>;

/// (1/q) sum_a f1((a + i)/q) f2((ba + x0 + i y0)/q + r0). A negative y0 is
/// evaluated at height |y0|/q.
std::complex<double> weyl_sum_general(i64 q, i64 b, const AutomorphicFn& f1, const AutomorphicFn& f2,
                                      double x0, double y0, Rational r0,
                                      const WorkerPool& pool = serial_pool());

/// Box [x1, x2] x [y1, y2] inside the standard fundamental domain.
struct Box {
  double x1, x2, y1, y2;
};

/// (3/pi)(x2 - x1)(1/y1 - 1/y2). Throws DomainError if the box leaves the
/// fundamental domain.
double box_measure(const Box& box);

/// Dyadic grid: at level L the x-range [-1/2, 1/2] and the y-range [1, ymax]
/// (split geometrically) are each cut into 2^L pieces.
struct BoxFamily {
  int levels = 4;
  double ymax = 10.0;
};

struct DiscrepancyReport {
  double value = 0.0;  // sup over boxes (products of boxes for pairs)
  Box worst_box{};
  Box worst_box2{};  // second factor for pair sets
  double cusp_mass_bound = 0.0;  // (3/pi)/ymax
};

/// sup |empirical mass - mu(box)| after reducing every point to the
/// fundamental domain. For dim 2 sets the family is B x B' with B and B' at
/// the same level, compared against the product measure. Sets of higher
/// dimension are not supported.
DiscrepancyReport discrepancy(const HoroPointSet& points, const BoxFamily& family = {});

/// Explicit family of boxes (single-point sets only).
double discrepancy(const HoroPointSet& points, const std::vector<Box>& boxes);

class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ContinuousConfig {
  double T = 200.0;
  double y = 1.0;
  double interval_lo = 0.0;  // support of the bump weight W
  double interval_hi = 1.0;
  double x0 = 0.0;
  double y0 = 1.0;
  double r0 = 0.0;
  std::size_t n_nodes = 0;       // 0: choose 160 T |I|
  double q_exponent = 0.99;      // Q = T^q_exponent
  i64 small_denominator = 10;    // q at or below this is flagged as non-decaying
};

struct ContinuousReport {
  std::complex<double> value;
  RationalApprox approx;
  i64 Q = 0;
  std::size_t panels = 0;
  std::size_t nodes = 0;
  bool small_denominator = false;
};

/// int W(x) f1(x + i/T) f2(xy + r0 + (x0 + i y0)/T) dx by composite
/// Gauss-Legendre on panels of width at most 1/(8T), together with the best
/// rational approximation a/q of y with q <= T^q_exponent.
/// Throws ResolutionError when the node spacing exceeds 1/(4T).
ContinuousReport continuous_pair_integral(const ContinuousConfig& cfg, const AutomorphicFn& f1,
                                          const AutomorphicFn& f2,
                                          const WorkerPool& pool = serial_pool());

}  // namespace horolab
