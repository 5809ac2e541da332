#pragma once

// Exact integer and modular arithmetic shared by every other module.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace horolab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Raised when an input lies outside the mathematical domain of an operation
/// (non-invertible residue, degenerate lattice, gcd condition violated, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A congruence class modulo a positive integer, stored as its least
/// non-negative representative.
class Residue {
 public:
  Residue(i64 value, i64 modulus);

  i64 value() const { return value_; }
  i64 modulus() const { return modulus_; }

  friend bool operator==(const Residue&, const Residue&) = default;

 private:
  i64 value_;
  i64 modulus_;
};

/// A rational a/q together with a bound on its distance to the number it
/// approximates.
struct RationalApprox {
  i64 numerator = 0;
  i64 denominator = 1;
  double error_bound = 0.0;
  /// Denominator of the convergent following the returned one, or 0 when the
  /// expansion terminated.
  i64 next_denominator = 0;
};

inline i64 floor_mod(i64 a, i64 m) {
  const i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 gcd(i64 a, i64 b);
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 base, u64 exp, i64 m);

/// Inverse of a coprime residue. Throws DomainError otherwise.
Residue mod_inv(const Residue& a);

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime(u64 n);

/// True iff a^((p-1)/k) == 1 mod p. Requires a prime modulus and k | p-1.
bool power_residue(const Residue& a, i64 k);

/// Continued-fraction convergent a/q of y with the largest q <= Q.
RationalApprox best_rational(double y, i64 Q);

/// Primes <= N in increasing order.
std::vector<i64> prime_sieve(i64 N);

/// Kronecker symbol (a|n) for n > 0.
int kronecker(i64 a, i64 n);

/// Smallest primitive root modulo an odd prime.
i64 primitive_root(i64 p);

/// Moebius function of a small integer by trial division.
int moebius(i64 n);

/// Positive divisors of n in increasing order.
std::vector<i64> divisors(i64 n);

/// Euler phi by trial division.
i64 euler_phi(i64 n);

/// Smallest-prime-factor table for fast factorisation of n <= limit.
class FactorTable {
 public:
  explicit FactorTable(i64 limit);

  i64 limit() const { return limit_; }
  i64 smallest_prime_factor(i64 n) const;
  /// Prime-power factorisation, primes increasing. Throws for n > limit.
  std::vector<std::pair<i64, int>> factor(i64 n) const;

 private:
  i64 limit_;
  std::vector<std::uint32_t> spf_;
};

}  // namespace horolab
