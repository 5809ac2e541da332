#pragma once

// Sieve counts over lattice point sets, the Erdos-Wolke case split, and
// Sato-Tate partial sums.

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "horolab/arith.hpp"
#include "horolab/heckeforms.hpp"
#include "horolab/parallel.hpp"

namespace horolab {

struct SieveSet {
  std::vector<std::pair<i64, i64>> points;
  double X = 0.0;  // density parameter
  double Y = 0.0;  // error parameter
  i64 q = 1;       // primes dividing q are never sifted
  i64 max_coord = 0;

  /// (#{n in S : d1 | n1, d2 | n2} - X/(d1 d2)) / Y.
  double class_count_deviation(i64 d1, i64 d2) const;
};

/// Points of Lambda_{q,b} with positive coordinates and R1 <= |n| <= R2.
/// X = vol/q, Y = perimeter/s for the quarter annulus.
SieveSet lattice_sieve_set(i64 q, i64 b, double R1, double R2);

/// All of [1, L]^2 with q = 1, X = L^2, Y = 2L.
SieveSet box_sieve_set(i64 L);

/// Shared factorisation table; inputs above 10^7 are rejected.
const FactorTable& sieve_factor_table(i64 limit);

/// Number of n in S with a_i | n_i and n_i / a_i free of primes p <= y_i,
/// p not dividing q.
i64 rough_count(const SieveSet& S, i64 a1, i64 a2, double y1, double y2);

struct SelbergCheck {
  i64 lhs = 0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / (rhs / C)
  bool pass = false;
};

/// lhs = rough_count, rhs = C (X/(a1 a2 log(1+y1) log(1+y2)) + Y y1^2 y2^2).
SelbergCheck selberg_bound_check(const SieveSet& S, i64 a1, i64 a2, double y1, double y2, double C);

/// Constant used for every lattice instance, fixed from full-box instances.
inline constexpr double kSelbergConstant = 20.0;

struct SelbergCalibration {
  double max_ratio = 0.0;  // largest lhs / (bound without constant)
  int instances = 0;
};

/// Runs selberg_bound_check on full-box instances with L in box_sides and a
/// grid of (a, y) parameters, reporting the largest observed ratio.
SelbergCalibration calibrate_selberg_constant(const std::vector<i64>& box_sides);

enum class SieveCase { I, II, III, IV };

const char* to_string(SieveCase c);

struct CaseLabel {
  SieveCase label = SieveCase::I;
  int k = 0;           // number of prime powers in a
  i64 a = 1;           // p_1^e_1 ... p_k^e_k <= z
  i64 b = 1;           // n / a (includes primes dividing q)
  i64 next_prime = 0;  // p_{k+1}, or 0 when n has no further prime factor
};

/// xi = log z * log log z.
double sieve_xi(double z);

/// Which of the four case conditions hold for (p_{k+1}, a). A missing next
/// prime counts as infinitely large.
std::array<bool, 4> case_predicates(i64 next_prime, i64 a, double z);

CaseLabel classify_case(i64 n, double z, i64 q = 1);

struct CaseScan {
  std::array<i64, 4> counts{};
  i64 unlabelled = 0;        // no predicate holds
  i64 multiply_labelled = 0;  // more than one holds
  bool ok() const { return unlabelled == 0 && multiply_labelled == 0; }
};

/// Evaluate the predicates for every n in [1, N].
CaseScan classify_scan(i64 N, double z, i64 q = 1, const WorkerPool& pool = serial_pool());

struct SieveMainReport {
  double lhs = 0.0;
  double X = 0.0;
  double z = 0.0;
  double mertens_factor = 0.0;  // exp(sum_{p <= z} (lambda1(p) + lambda2(p)) / p)
  double rhs_main = 0.0;        // X / (log z)^2 * mertens_factor
};

/// sum of lambda1(n1) lambda2(n2) over S with (n1 n2, q) = 1, and the main
/// term of the sieve bound with z = X^gamma.
SieveMainReport sieve_main_lhs(const SieveSet& S, const CoeffTable& lam1, const CoeffTable& lam2,
                               double gamma = 0.25);

/// sum_{p <= z} |lambda(p)| / p.
double st_partial_sum(const CoeffTable& table, i64 z);

struct ChebyshevReport {
  double max_identity_error = 0.0;  // between the two forms of the bound
  double min_margin = 0.0;          // min of bound(x) - |x|
  double argmin = 0.0;
  bool pass = false;
};

/// Checks 1 + (x^2-1)/2 - (x^2-1)^2/18 = 17/18 + (4/9)(x^2-1) - (x^4-3x^2+1)/18
/// and |x| <= bound on `points` equally spaced x in [-2, 2].
ChebyshevReport chebyshev_identity_check(std::size_t points);

}  // namespace horolab
