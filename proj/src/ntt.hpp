#pragma once

// Number-theoretic transform over word-size primes, used for exact power
// series arithmetic (the eta-product expansion of Ramanujan's tau).

#include <cstdint>
#include <vector>

namespace horolab::detail {

struct NttPrime {
  std::uint32_t modulus;
  std::uint32_t generator;
};

/// Primes p with 2^21 | p - 1, each with a primitive root.
const std::vector<NttPrime>& ntt_primes();

/// Truncated product a*b mod (x^len, p).
std::vector<std::uint32_t> multiply_mod(const std::vector<std::uint32_t>& a,
                                        const std::vector<std::uint32_t>& b,
                                        std::size_t len, const NttPrime& prime);

/// Truncated square a*a mod (x^len, p).
std::vector<std::uint32_t> square_mod(const std::vector<std::uint32_t>& a, std::size_t len,
                                      const NttPrime& prime);

}  // namespace horolab::detail
