#include "horolab/arith.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace horolab {

Residue::Residue(i64 value, i64 modulus) : modulus_(modulus) {
  if (modulus <= 0) throw DomainError("residue modulus must be positive");
  value_ = floor_mod(value, modulus);
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<i128>(floor_mod(a, m)) * floor_mod(b, m) % m);
}

i64 powmod(i64 base, u64 exp, i64 m) {
  if (m == 1) return 0;
  i64 result = 1;
  i64 b = floor_mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, b, m);
    b = mulmod(b, b, m);
    exp >>= 1;
  }
  return result;
}

Residue mod_inv(const Residue& a) {
  // extended Euclid on (value, modulus)
  i64 old_r = a.value(), r = a.modulus();
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 quot = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - quot * r};
    std::tie(old_s, s) = std::pair{s, old_s - quot * s};
  }
  if (old_r != 1 && a.modulus() != 1)
    throw DomainError("residue " + std::to_string(a.value()) + " is not invertible mod " +
                      std::to_string(a.modulus()));
  return Residue(old_s, a.modulus());
}

namespace {

u64 mulmod_u(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod_u(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u(r, b, m);
    b = mulmod_u(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // this witness set is deterministic below 3.3e24
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod_u(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod_u(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool power_residue(const Residue& a, i64 k) {
  const i64 p = a.modulus();
  if (!is_prime(static_cast<u64>(p))) throw DomainError("power_residue needs a prime modulus");
  if (k <= 0 || (p - 1) % k != 0) throw DomainError("power_residue needs k | p-1");
  if (a.value() == 0) throw DomainError("power_residue needs a unit");
  return powmod(a.value(), static_cast<u64>((p - 1) / k), p) == 1;
}

RationalApprox best_rational(double y, i64 Q) {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("best_rational needs y > 0");
  if (Q < 1) throw DomainError("best_rational needs Q >= 1");

  // convergents p_k/q_k with p_{-1}=1, q_{-1}=0, p_{-2}=0, q_{-2}=1
  i64 p_prev = 1, q_prev = 0;
  i64 p_cur = static_cast<i64>(std::floor(y)), q_cur = 1;
  double frac = y - std::floor(y);
  const double exact_tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, y);

  auto exact = [&](i64 p, i64 q) {
    return std::abs(y - static_cast<double>(p) / static_cast<double>(q)) <= exact_tol;
  };

  while (true) {
    if (exact(p_cur, q_cur) || frac == 0.0) {
      return {p_cur, q_cur, std::abs(y - static_cast<double>(p_cur) / q_cur), 0};
    }
    const double inv = 1.0 / frac;
    const double digit_d = std::floor(inv);
    frac = inv - digit_d;
    if (digit_d > 4e18) return {p_cur, q_cur, std::abs(y - static_cast<double>(p_cur) / q_cur), 0};
    const i64 digit = static_cast<i64>(digit_d);
    const i128 q_next = static_cast<i128>(digit) * q_cur + q_prev;
    const i128 p_next = static_cast<i128>(digit) * p_cur + p_prev;
    if (q_next > Q) {
      const double bound = 1.0 / (static_cast<double>(q_cur) * static_cast<double>(q_next));
      return {p_cur, q_cur, bound, static_cast<i64>(q_next)};
    }
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = static_cast<i64>(p_next);
    q_cur = static_cast<i64>(q_next);
  }
}

std::vector<i64> prime_sieve(i64 N) {
  std::vector<i64> primes;
  if (N < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(N) + 1, false);
  for (i64 i = 2; i <= N; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (i64 j = i * i; j <= N; j += i) composite[j] = true;
  }
  return primes;
}

int kronecker(i64 a, i64 n) {
  if (n <= 0) throw DomainError("kronecker symbol needs n > 0");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    const i64 a8 = floor_mod(a, 8);
    if (a8 % 2 == 0) return 0;
    if (a8 == 3 || a8 == 5) result = -result;
  }
  // Jacobi symbol for odd n
  a = floor_mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const i64 n8 = n % 8;
      if (n8 == 3 || n8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

i64 primitive_root(i64 p) {
  if (p == 2) return 1;
  if (!is_prime(static_cast<u64>(p))) throw DomainError("primitive_root needs a prime");
  std::vector<i64> prime_factors;
  i64 m = p - 1;
  for (i64 d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      prime_factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) prime_factors.push_back(m);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 r : prime_factors) {
      if (powmod(g, static_cast<u64>((p - 1) / r), p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw DomainError("no primitive root found");
}

int moebius(i64 n) {
  if (n <= 0) throw DomainError("moebius needs n >= 1");
  int mu = 1;
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> small, large;
  for (i64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

i64 euler_phi(i64 n) {
  i64 result = n;
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      while (n % d == 0) n /= d;
      result -= result / d;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

FactorTable::FactorTable(i64 limit) : limit_(std::max<i64>(limit, 1)) {
  spf_.assign(static_cast<std::size_t>(limit_) + 1, 0);
  for (i64 i = 2; i <= limit_; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    if (i > limit_ / i) continue;
    for (i64 j = i * i; j <= limit_; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
  }
}

i64 FactorTable::smallest_prime_factor(i64 n) const {
  if (n < 2 || n > limit_) throw DomainError("factor table lookup out of range");
  return spf_[n];
}

std::vector<std::pair<i64, int>> FactorTable::factor(i64 n) const {
  if (n < 1 || n > limit_) throw DomainError("factor table lookup out of range");
  std::vector<std::pair<i64, int>> out;
  while (n > 1) {
    const i64 p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

}  // namespace horolab
