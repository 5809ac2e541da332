#include "horolab/sieve_st.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "horolab/lattice.hpp"

namespace horolab {

using std::numbers::pi;

namespace {
constexpr i64 kFactorLimit = 10'000'000;
}

const FactorTable& sieve_factor_table(i64 limit) {
  if (limit > kFactorLimit) throw DomainError("factorisation beyond 10^7 is not supported");
  static std::mutex mu;
  static std::unique_ptr<FactorTable> table;
  std::lock_guard lock(mu);
  if (!table || table->limit() < limit) {
    // grow geometrically so repeated calls do not rebuild
    i64 size = 1 << 16;
    while (size < limit) size *= 2;
    table = std::make_unique<FactorTable>(std::min(size, kFactorLimit));
  }
  return *table;
}

double SieveSet::class_count_deviation(i64 d1, i64 d2) const {
  i64 count = 0;
  for (const auto& [n1, n2] : points)
    if (n1 % d1 == 0 && n2 % d2 == 0) ++count;
  return (static_cast<double>(count) - X / static_cast<double>(d1 * d2)) / Y;
}

SieveSet lattice_sieve_set(i64 q, i64 b, double R1, double R2) {
  if (!(R1 > 0 && R2 > R1)) throw DomainError("annulus needs 0 < R1 < R2");
  const ReducedBasis basis = gauss_reduce(lambda_lattice(q, b, +1));
  SieveSet S;
  S.q = q;
  const i64 r2max = static_cast<i64>(std::floor(R2));
  const double lo2 = R1 * R1, hi2 = R2 * R2;
  const i64 bm = floor_mod(b, q);
  for (i64 n2 = 1; n2 <= r2max; ++n2) {
    // n1 = -b n2 mod q
    i64 n1 = floor_mod(-mulmod(bm, n2, q), q);
    if (n1 == 0) n1 = q;
    for (; n1 <= r2max; n1 += q) {
      const double r = static_cast<double>(n1) * static_cast<double>(n1) + static_cast<double>(n2) * static_cast<double>(n2);
      if (r < lo2 || r > hi2) continue;
      S.points.emplace_back(n1, n2);
      S.max_coord = std::max({S.max_coord, n1, n2});
    }
  }
  if (S.points.empty()) throw DomainError("annulus contains no lattice points");
  const double vol = pi * (R2 * R2 - R1 * R1) / 4.0;
  const double perimeter = 2.0 * (R2 - R1) + pi / 2.0 * (R1 + R2);
  S.X = vol / static_cast<double>(q);
  S.Y = perimeter / basis.s();
  return S;
}

SieveSet box_sieve_set(i64 L) {
  if (L < 1) throw DomainError("box side must be positive");
  SieveSet S;
  S.q = 1;
  S.points.reserve(static_cast<std::size_t>(L * L));
  for (i64 n1 = 1; n1 <= L; ++n1)
    for (i64 n2 = 1; n2 <= L; ++n2) S.points.emplace_back(n1, n2);
  S.max_coord = L;
  S.X = static_cast<double>(L) * static_cast<double>(L);
  S.Y = 2.0 * static_cast<double>(L);
  return S;
}

namespace {

// m has no prime factor p <= y with p not dividing q
bool is_rough(i64 m, double y, i64 q, const FactorTable& ft) {
  while (m > 1) {
    const i64 p = ft.smallest_prime_factor(m);
    if (static_cast<double>(p) > y) return true;
    if (q % p != 0) return false;
    while (m % p == 0) m /= p;
  }
  return true;
}

}  // namespace

i64 rough_count(const SieveSet& S, i64 a1, i64 a2, double y1, double y2) {
  if (a1 < 1 || a2 < 1) throw DomainError("rough_count needs positive a_i");
  if (gcd(a1 * a2, S.q) != 1) throw DomainError("rough_count needs (a1 a2, q) = 1");
  const FactorTable& ft = sieve_factor_table(std::max<i64>(S.max_coord, 2));
  i64 count = 0;
  for (const auto& [n1, n2] : S.points) {
    if (n1 % a1 != 0 || n2 % a2 != 0) continue;
    if (is_rough(n1 / a1, y1, S.q, ft) && is_rough(n2 / a2, y2, S.q, ft)) ++count;
  }
  return count;
}

SelbergCheck selberg_bound_check(const SieveSet& S, i64 a1, i64 a2, double y1, double y2, double C) {
  if (!(y1 >= 1.0 && y2 >= 1.0)) throw DomainError("sieve levels must be >= 1");
  SelbergCheck r;
  r.lhs = rough_count(S, a1, a2, y1, y2);
  const double bound = S.X / (static_cast<double>(a1 * a2) * std::log1p(y1) * std::log1p(y2)) +
                       S.Y * y1 * y1 * y2 * y2;
  r.rhs = C * bound;
  r.ratio = static_cast<double>(r.lhs) / bound;
  r.pass = static_cast<double>(r.lhs) <= r.rhs;
  return r;
}

SelbergCalibration calibrate_selberg_constant(const std::vector<i64>& box_sides) {
  SelbergCalibration cal;
  for (i64 L : box_sides) {
    const SieveSet S = box_sieve_set(L);
    for (i64 a1 : {1, 2, 3, 5})
      for (i64 a2 : {1, 2, 7})
        for (double y1 : {1.0, 2.0, 3.0, 5.0, 10.0})
          for (double y2 : {1.0, 2.0, 5.0}) {
            const auto c = selberg_bound_check(S, a1, a2, y1, y2, 1.0);
            cal.max_ratio = std::max(cal.max_ratio, c.ratio);
            ++cal.instances;
          }
  }
  return cal;
}

const char* to_string(SieveCase c) {
  switch (c) {
    case SieveCase::I: return "I";
    case SieveCase::II: return "II";
    case SieveCase::III: return "III";
    case SieveCase::IV: return "IV";
  }
  return "?";
}

double sieve_xi(double z) { return std::log(z) * std::log(std::log(z)); }

std::array<bool, 4> case_predicates(i64 next_prime, i64 a, double z) {
  const double root = std::sqrt(z);
  const double xi = sieve_xi(z);
  const bool none = next_prime == 0;
  const double p = static_cast<double>(next_prime);
  const double ad = static_cast<double>(a);
  return {
      none || p >= root,
      !none && p < root && ad <= root,
      !none && p < xi && ad > root,
      // upper end strict so that (I) and (IV) do not share p = sqrt z
      !none && p >= xi && p < root && ad > root,
  };
}

CaseLabel classify_case(i64 n, double z, i64 q) {
  if (n < 1) throw DomainError("classify_case needs n >= 1");
  if (!(z >= 16.0)) throw DomainError("classify_case needs z >= 16");
  const FactorTable& ft = sieve_factor_table(std::max<i64>(n, 2));
  CaseLabel r;
  r.a = 1;
  for (const auto& [p, e] : ft.factor(n)) {
    if (q % p == 0) continue;
    i64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (r.next_prime == 0 && static_cast<double>(r.a) * static_cast<double>(pe) <= z) {
      r.a *= pe;
      ++r.k;
    } else if (r.next_prime == 0) {
      r.next_prime = p;
    }
  }
  r.b = n / r.a;
  const auto pred = case_predicates(r.next_prime, r.a, z);
  for (int c = 0; c < 4; ++c)
    if (pred[c]) {
      r.label = static_cast<SieveCase>(c);
      break;
    }
  return r;
}

CaseScan classify_scan(i64 N, double z, i64 q, const WorkerPool& pool) {
  sieve_factor_table(std::max<i64>(N, 2));
  const std::size_t chunks = (static_cast<std::size_t>(N) + kReductionChunk - 1) / kReductionChunk;
  std::vector<CaseScan> part(chunks);
  pool.parallel_for(chunks, [&](std::size_t ch) {
    CaseScan s;
    const i64 lo = static_cast<i64>(ch * kReductionChunk) + 1;
    const i64 hi = std::min<i64>(N, lo + static_cast<i64>(kReductionChunk) - 1);
    for (i64 n = lo; n <= hi; ++n) {
      const CaseLabel c = classify_case(n, z, q);
      const auto pred = case_predicates(c.next_prime, c.a, z);
      int hits = 0;
      for (int i = 0; i < 4; ++i) hits += pred[i];
      if (hits == 0) ++s.unlabelled;
      if (hits > 1) ++s.multiply_labelled;
      if (hits >= 1) ++s.counts[static_cast<int>(c.label)];
    }
    part[ch] = s;
  });
  CaseScan total;
  for (const auto& s : part) {
    for (int i = 0; i < 4; ++i) total.counts[i] += s.counts[i];
    total.unlabelled += s.unlabelled;
    total.multiply_labelled += s.multiply_labelled;
  }
  return total;
}

SieveMainReport sieve_main_lhs(const SieveSet& S, const CoeffTable& lam1, const CoeffTable& lam2, double gamma) {
  if (!(gamma > 0 && gamma < 0.5)) throw DomainError("gamma must lie in (0, 1/2)");
  SieveMainReport r;
  CompensatedSum acc;
  for (const auto& [n1, n2] : S.points) {
    if (gcd(n1, S.q) != 1 || gcd(n2, S.q) != 1) continue;
    acc.add(lam1(n1) * lam2(n2));
  }
  r.lhs = acc.value();
  r.X = S.X;
  r.z = std::pow(S.X, gamma);
  const i64 zi = static_cast<i64>(std::floor(r.z));
  CompensatedSum mertens;
  for (i64 p : prime_sieve(std::max<i64>(zi, 2))) {
    if (p > zi) break;
    mertens.add((lam1(p) + lam2(p)) / static_cast<double>(p));
  }
  r.mertens_factor = std::exp(mertens.value());
  const double lz = std::log(r.z);
  r.rhs_main = r.X / (lz * lz) * r.mertens_factor;
  return r;
}

double st_partial_sum(const CoeffTable& table, i64 z) {
  if (z < 2) return 0.0;
  if (table.N < z) throw TruncationError("st_partial_sum: table shorter than z");
  CompensatedSum acc;
  for (i64 p : prime_sieve(z)) acc.add(std::abs(table.lam[p]) / static_cast<double>(p));
  return acc.value();
}

ChebyshevReport chebyshev_identity_check(std::size_t points) {
  if (points < 2) throw DomainError("chebyshev_identity_check needs at least two grid points");
  ChebyshevReport r;
  r.min_margin = INFINITY;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    const double x2 = x * x;
    const double lp2 = x2 - 1.0;  // lambda(p^2)
    const double left = 1.0 + lp2 / 2.0 - lp2 * lp2 / 18.0;
    const double right = 17.0 / 18.0 + 4.0 / 9.0 * lp2 - (x2 * x2 - 3.0 * x2 + 1.0) / 18.0;
    r.max_identity_error = std::max(r.max_identity_error, std::abs(left - right));
    const double margin = left - std::abs(x);
    if (margin < r.min_margin) {
      r.min_margin = margin;
      r.argmin = x;
    }
  }
  r.pass = r.max_identity_error <= 1e-12 && r.min_margin >= -1e-12;
  return r;
}

}  // namespace horolab
