#include "ntt.hpp"

#include <algorithm>
#include <stdexcept>

namespace horolab::detail {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// The modulus is a template parameter so that every reduction is by a
// compile-time constant.
template <u32 P, u32 G>
void transform(std::vector<u32>& a, bool inverse) {
  constexpr u64 p = P;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<u32> roots(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    u64 w = pow_mod(G, (p - 1) / len, p);
    if (inverse) w = pow_mod(w, p - 2, p);
    const std::size_t half = len / 2;
    roots[0] = 1;
    for (std::size_t k = 1; k < half; ++k) roots[k] = static_cast<u32>(roots[k - 1] * w % p);
    for (std::size_t i = 0; i < n; i += len) {
      u32* lo = a.data() + i;
      u32* hi = lo + half;
      for (std::size_t k = 0; k < half; ++k) {
        const u64 u = lo[k];
        const u64 v = hi[k] * static_cast<u64>(roots[k]) % p;
        lo[k] = static_cast<u32>(u + v >= p ? u + v - p : u + v);
        hi[k] = static_cast<u32>(u >= v ? u - v : u + p - v);
      }
    }
  }
  if (inverse) {
    const u64 n_inv = pow_mod(n % p, p - 2, p);
    for (auto& x : a) x = static_cast<u32>(x * n_inv % p);
  }
}

template <u32 P>
void pointwise(std::vector<u32>& a, const std::vector<u32>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = static_cast<u32>(static_cast<u64>(a[i]) * b[i] % P);
}

void transform(std::vector<u32>& a, bool inverse, const NttPrime& prime) {
  switch (prime.modulus) {
    case 998244353u: return transform<998244353u, 3u>(a, inverse);
    case 167772161u: return transform<167772161u, 3u>(a, inverse);
    case 469762049u: return transform<469762049u, 3u>(a, inverse);
    case 754974721u: return transform<754974721u, 11u>(a, inverse);
    case 2113929217u: return transform<2113929217u, 5u>(a, inverse);
    default: throw std::invalid_argument("unsupported NTT prime");
  }
}

void pointwise(std::vector<u32>& a, const std::vector<u32>& b, const NttPrime& prime) {
  switch (prime.modulus) {
    case 998244353u: return pointwise<998244353u>(a, b);
    case 167772161u: return pointwise<167772161u>(a, b);
    case 469762049u: return pointwise<469762049u>(a, b);
    case 754974721u: return pointwise<754974721u>(a, b);
    case 2113929217u: return pointwise<2113929217u>(a, b);
    default: throw std::invalid_argument("unsupported NTT prime");
  }
}

std::size_t transform_size(std::size_t len) {
  std::size_t n = 1;
  while (n < 2 * len) n <<= 1;
  if (n > (std::size_t{1} << 22)) throw std::length_error("power series too long for NTT");
  return n;
}

}  // namespace

const std::vector<NttPrime>& ntt_primes() {
  static const std::vector<NttPrime> primes = {
      {998244353u, 3u}, {167772161u, 3u}, {469762049u, 3u}, {754974721u, 11u}, {2113929217u, 5u}};
  return primes;
}

std::vector<u32> multiply_mod(const std::vector<u32>& a, const std::vector<u32>& b, std::size_t len,
                              const NttPrime& prime) {
  const std::size_t n = transform_size(len);
  std::vector<u32> fa(n, 0), fb(n, 0);
  std::copy_n(a.begin(), std::min(a.size(), len), fa.begin());
  std::copy_n(b.begin(), std::min(b.size(), len), fb.begin());
  transform(fa, false, prime);
  transform(fb, false, prime);
  pointwise(fa, fb, prime);
  transform(fa, true, prime);
  fa.resize(len);
  return fa;
}

std::vector<u32> square_mod(const std::vector<u32>& a, std::size_t len, const NttPrime& prime) {
  const std::size_t n = transform_size(len);
  std::vector<u32> fa(n, 0);
  std::copy_n(a.begin(), std::min(a.size(), len), fa.begin());
  transform(fa, false, prime);
  pointwise(fa, fa, prime);
  transform(fa, true, prime);
  fa.resize(len);
  return fa;
}

}  // namespace horolab::detail
