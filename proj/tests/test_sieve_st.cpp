#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "doctest.h"
#include "horolab/sieve_st.hpp"

using namespace horolab;

namespace {

bool rough_by_trial_division(i64 m, double y, i64 q) {
  for (i64 p = 2; p <= m && static_cast<double>(p) <= y; ++p) {
    bool prime = true;
    for (i64 d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime && m % p == 0 && q % p != 0) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("sieve_st") {

TEST_CASE("lattice sieve sets") {
  const SieveSet S = lattice_sieve_set(5, 2, 1.0, 14.2);
  for (const auto& [n1, n2] : S.points) {
    CHECK(floor_mod(n1 + 2 * n2, 5) == 0);
    CHECK(n1 >= 1);
    CHECK(n2 >= 1);
  }
  CHECK(S.class_count_deviation(1, 1) == doctest::Approx((static_cast<double>(S.points.size()) - S.X) / S.Y));
  CHECK_THROWS_AS(lattice_sieve_set(1009, 505, 2.0, 2.1), DomainError);
  CHECK_THROWS_AS(lattice_sieve_set(5, 2, 3.0, 1.0), DomainError);

  // point count against area / q within a few perimeter / s
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const i64 q = 50 + static_cast<i64>(rng() % 2000);
    i64 b;
    do b = 1 + static_cast<i64>(rng() % static_cast<u64>(q - 1));
    while (gcd(b, q) != 1);
    const SieveSet T = lattice_sieve_set(q, b, 100.0, 600.0);
    CHECK(std::abs(static_cast<double>(T.points.size()) - T.X) <= 4.0 * T.Y + 4.0);
    CHECK(std::abs(T.class_count_deviation(2, 3)) <= 6.0);
  }
}

TEST_CASE("rough counts against trial division") {
  const SieveSet S = lattice_sieve_set(31, 7, 20.0, 160.0);
  for (auto [a1, a2, y1, y2] : {std::tuple{1, 1, 1.0, 1.0}, {1, 1, 7.5, 3.0}, {2, 3, 11.0, 5.0}, {5, 1, 40.0, 2.0}}) {
    i64 expect = 0;
    for (const auto& [n1, n2] : S.points)
      if (n1 % a1 == 0 && n2 % a2 == 0 && rough_by_trial_division(n1 / a1, y1, 31) &&
          rough_by_trial_division(n2 / a2, y2, 31))
        ++expect;
    CHECK(rough_count(S, a1, a2, y1, y2) == expect);
  }
  // y = 1 is plain divisibility
  i64 div = 0;
  for (const auto& [n1, n2] : S.points) div += n1 % 2 == 0 && n2 % 3 == 0;
  CHECK(rough_count(S, 2, 3, 1.0, 1.0) == div);
  // monotone in y
  i64 last = rough_count(S, 1, 1, 1.0, 1.0);
  for (double y : {2.0, 3.0, 5.0, 10.0, 30.0}) {
    const i64 c = rough_count(S, 1, 1, y, 2.0);
    CHECK(c <= last);
    last = c;
  }
  CHECK(rough_count(S, 1000, 1, 1.0, 1.0) == 0);
  CHECK_THROWS_AS(rough_count(S, 31, 1, 1.0, 1.0), DomainError);
}

TEST_CASE("Selberg-type bound") {
  const SieveSet S = lattice_sieve_set(101, 13, 50.0, 300.0);
  const SelbergCheck c = selberg_bound_check(S, 1, 1, 1.0, 1.0, 1.0);
  CHECK(c.rhs >= S.X / (std::log(2.0) * std::log(2.0)));
  CHECK(c.pass);
  const SelbergCheck z = selberg_bound_check(S, 5000, 1, 3.0, 3.0, kSelbergConstant);
  CHECK(z.lhs == 0);
  CHECK(z.pass);
  const SelbergCalibration cal = calibrate_selberg_constant({30, 60});
  CHECK(cal.instances == 2 * 4 * 3 * 5 * 3);
  CHECK(cal.max_ratio > 0.1);
  CHECK(cal.max_ratio <= kSelbergConstant);
  const SieveSet box = box_sieve_set(10);
  CHECK(box.points.size() == 100);
  CHECK(rough_count(box, 1, 1, 1.0, 1.0) == 100);
  // coordinates free of 2 and 3: {1, 5, 7} in each
  CHECK(rough_count(box, 1, 1, 3.0, 3.0) == 9);
}

TEST_CASE("case classification") {
  const double z = 1000.0;
  CHECK(classify_case(1, z).label == SieveCase::I);
  CHECK(classify_case(1, z).next_prime == 0);
  const CaseLabel p = classify_case(1009, z);
  CHECK(p.label == SieveCase::I);
  CHECK(p.a == 1);
  CHECK(p.next_prime == 1009);
  // 2^3 * 3 * 5 * 7 = 840 <= 1000, next prime 11 < xi
  const CaseLabel c = classify_case(840 * 11, z);
  CHECK(c.a == 840);
  CHECK(c.k == 4);
  CHECK(c.next_prime == 11);
  CHECK(c.label == SieveCase::III);
  CHECK(sieve_xi(z) == doctest::Approx(std::log(z) * std::log(std::log(z))));
  // a = 2 <= sqrt z, next prime 1013 >= sqrt z
  CHECK(classify_case(2 * 1013, z).label == SieveCase::I);
  // a = 2 * 3 = 6, next 7 < sqrt z: case II
  CHECK(classify_case(2 * 3 * 7 * 7 * 7 * 7, z).label == SieveCase::II);
  // a = 2^5 = 32 > sqrt z? no; a = 64 * 3 = 192 > 31.6, next 29 in [xi, sqrt z)
  const CaseLabel iv = classify_case(64 * 3 * 29 * 29, z);
  CHECK(iv.a == 192);
  CHECK(iv.next_prime == 29);
  CHECK(iv.label == SieveCase::IV);
  // primes dividing q are skipped
  const CaseLabel qs = classify_case(2 * 3 * 7, z, 3);
  CHECK(qs.a == 14);
  CHECK(qs.b == 3);
  // exclusivity at p = sqrt z
  const auto pr = case_predicates(31, 40, 961.0);
  CHECK(pr[0]);
  CHECK_FALSE(pr[3]);
  CHECK_THROWS_AS(classify_case(5, 10.0), DomainError);

  const CaseScan s = classify_scan(200000, 1000.0, 1, WorkerPool(2));
  CHECK(s.ok());
  CHECK(s.counts[0] + s.counts[1] + s.counts[2] + s.counts[3] == 200000);
}

TEST_CASE("main sieve sum") {
  const SieveSet S = lattice_sieve_set(11, 3, 5.0, 60.0);
  CoeffTable one;
  one.N = 100;
  one.lam.assign(101, 1.0);
  const SieveMainReport r = sieve_main_lhs(S, one, one);
  i64 coprime = 0;
  for (const auto& [n1, n2] : S.points) coprime += gcd(n1 * n2, 11) == 1;
  CHECK(r.lhs == doctest::Approx(static_cast<double>(coprime)));
  CHECK(r.z == doctest::Approx(std::pow(S.X, 0.25)));
  CHECK(r.rhs_main > 0);
  CoeffTable small = one;
  small.N = 10;
  CHECK_THROWS_AS(sieve_main_lhs(S, small, one), TruncationError);
}

TEST_CASE("Sato-Tate partial sums") {
  const CoeffTable tau = tau_table(1000);
  CHECK(st_partial_sum(tau, 2) == doctest::Approx(24.0 / std::pow(2.0, 5.5) / 2.0).epsilon(1e-14));
  CoeffTable zero;
  zero.N = 100;
  zero.lam.assign(101, 0.0);
  CHECK(st_partial_sum(zero, 100) == 0.0);
  CHECK_THROWS_AS(st_partial_sum(tau, 1001), TruncationError);
}

TEST_CASE("Chebyshev inequality") {
  const ChebyshevReport r = chebyshev_identity_check(100001);
  CHECK(r.pass);
  CHECK(r.max_identity_error < 1e-14);
  CHECK(r.min_margin >= -1e-12);
  CHECK(std::abs(r.min_margin) < 1e-12);  // equality at x = +-2 and +-1
  auto bound = [](double x) { return (8 + 11 * x * x - x * x * x * x) / 18; };
  CHECK(bound(2.0) == doctest::Approx(2.0));
  CHECK(bound(0.0) == doctest::Approx(4.0 / 9.0));
  CHECK(bound(1.0) == doctest::Approx(1.0));
}

}
