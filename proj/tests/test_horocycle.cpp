#include <numbers>
#include <random>

#include "doctest.h"
#include "horolab/expsums.hpp"
#include "horolab/horocycle.hpp"
#include "horolab/lattice.hpp"

using namespace horolab;
using std::numbers::pi;

TEST_SUITE("horocycle") {

TEST_CASE("point sets") {
  const HoroPointSet h = hecke_points(7);
  CHECK(h.count() == 7);
  CHECK(h.at(3, 0).x == doctest::Approx(3.0 / 7));
  CHECK(h.at(3, 0).y == doctest::Approx(1.0 / 7));
  const HoroPointSet p = pair_points(11, 3);
  CHECK(p.count() == 11);
  CHECK(p.dim == 2);
  CHECK(p.at(5, 1).x == doctest::Approx(4.0 / 11));  // 15 mod 11
  CHECK_THROWS_AS(pair_points(12, 4), DomainError);
  const TuplePoints t = tuple_points(101, {1, 2, 5});
  i64 expect = -1;
  for (auto [i, j] : {std::pair{1, 2}, {2, 1}, {1, 5}, {5, 1}, {2, 5}, {5, 2}}) {
    const i64 r = mulmod(i, mod_inv(Residue(j, 101)).value(), 101);
    const i64 s2 = s_min_squared(101, r);
    if (expect < 0 || s2 < expect) expect = s2;
  }
  CHECK(t.s_squared == expect);
  const HoroPointSet m = monomial_points(1, 2, 13, 2);
  CHECK(m.at(3, 1).x == doctest::Approx(5.0 / 13));  // 2 * 9 mod 13
  CHECK_THROWS_AS(monomial_points(2, 2, 13, 2), DomainError);
}

TEST_CASE("Weyl sums of constants and means") {
  const WorkerPool pool(3);
  const WeylReport r = weyl_sum(pair_points(1009, 505), TestFunction::constant(2.0), TestFunction::constant(3.0), pool);
  CHECK(r.value.real() == doctest::Approx(6.0));
  CHECK(r.target == doctest::Approx(6.0));
  CHECK(r.s == doctest::Approx(std::sqrt(5.0)));
  // a single Hecke orbit equidistributes: the incomplete Eisenstein average
  // approaches its mean
  const TestFunction e = TestFunction::eisenstein(Bump{});
  const WeylReport h = weyl_sum(hecke_points(20011), std::vector<TestFunction>{e}, pool);
  CHECK(h.abs_error < 0.01);
}

TEST_CASE("Weyl sum of y^6 Delta equals its lattice-sum form") {
  const auto tauN = ramanujan_tau(6000);
  const AutomorphicFn F = [&](HalfPlanePoint z) {
    std::complex<double> s = 0;
    for (int n = 1; n <= 6000; ++n)
      s += static_cast<double>(tauN[n]) * std::exp(std::complex<double>(-2 * pi * n * z.y, 2 * pi * n * z.x));
    return std::pow(z.y, 6.0) * s;
  };
  const CoeffTable tau = tau_table(6000);
  for (double x0 : {0.0, 0.3}) {
    const i64 q = 101, b = 7;
    const LatticeModelConfig c{q, b, +1, 50.0, 1};
    const auto m = weyl_lattice_model(c, tau, tau, nullptr, KernelG::holomorphic(12, 12, x0, 1.0));
    const auto d = weyl_sum_general(q, b, F, F, x0, 1.0, {0, 1});
    CHECK(std::abs(m.value - d) <= 1e-9 * std::abs(d));
  }
}

TEST_CASE("box measure and the fundamental domain") {
  CHECK(box_measure({-0.5, 0.5, 1.0, 2.0}) == doctest::Approx(3.0 / pi * 0.5));
  CHECK_THROWS_AS(box_measure({-0.5, 0.5, 0.9, 2.0}), DomainError);
  CHECK_THROWS_AS(box_measure({-0.6, 0.5, 1.0, 2.0}), DomainError);
  CHECK_NOTHROW(box_measure({0.4, 0.5, 0.95, 2.0}));
}

TEST_CASE("discrepancy against a direct count") {
  const HoroPointSet h = hecke_points(4001);
  const std::vector<Box> boxes = {{-0.5, 0.0, 1.0, 1.5}, {0.0, 0.25, 1.2, 3.0}, {-0.1, 0.1, 2.0, 10.0}};
  double worst = 0.0;
  for (const Box& b : boxes) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < h.count(); ++i) {
      const HalfPlanePoint z = fd_reduce(h.at(i, 0)).point;
      if (z.x >= b.x1 && z.x < b.x2 && z.y >= b.y1 && z.y < b.y2) ++hits;
    }
    worst = std::max(worst, std::abs(static_cast<double>(hits) / 4001.0 - box_measure(b)));
  }
  CHECK(discrepancy(h, boxes) == doctest::Approx(worst).epsilon(1e-12));
  CHECK(worst < 0.05);
}

TEST_CASE("discrepancy of uniform samples is small") {
  // rejection sampling from (3/pi) dx dy / y^2 on the fundamental domain
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  HoroPointSet s;
  s.q = 1;
  while (s.points.size() < 20000) {
    const double x = U(rng) - 0.5;
    const double y = std::sqrt(3.0) / 2 / U(rng);  // density proportional to 1/y^2 above sqrt 3 / 2
    if (x * x + y * y >= 1.0) s.points.push_back({x, y});
  }
  const DiscrepancyReport d = discrepancy(s, BoxFamily{3, 10.0});
  CHECK(d.value < 0.02);
  const DiscrepancyReport cusp = discrepancy(hecke_points(11), BoxFamily{3, 10.0});
  CHECK(cusp.value > d.value);
}

TEST_CASE("continuous horocycle integral") {
  const TestFunction phi = TestFunction::delta_density().centered();
  const AutomorphicFn f = [phi](HalfPlanePoint z) { return std::complex<double>(phi(z), 0.0); };
  ContinuousConfig c;
  c.T = 50;
  c.y = 1.6180339887498949;
  const ContinuousReport r = continuous_pair_integral(c, f, f);
  CHECK(r.Q == static_cast<i64>(std::floor(std::pow(50.0, 0.99))));
  CHECK(r.approx.denominator <= r.Q);
  CHECK(r.approx.denominator == 34);
  CHECK(r.nodes == 8000);
  c.n_nodes = 100;
  CHECK_THROWS_AS(continuous_pair_integral(c, f, f), ResolutionError);
  c.n_nodes = 0;
  c.y = 0.5;
  CHECK(continuous_pair_integral(c, f, f).small_denominator);
}

}
