#include "horolab/horocycle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <chrono>
#include <cmath>
#include <numbers>

#include "horolab/lattice.hpp"

namespace horolab {

using std::numbers::pi;

namespace {

void require_unit(i64 b, i64 q) {
  if (gcd(b, q) != 1)
    throw DomainError("shift " + std::to_string(b) + " is not a unit mod " + std::to_string(q));
}

HalfPlanePoint low_point(i64 a, i64 q) {
  const double qd = static_cast<double>(q);
  return {static_cast<double>(a) / qd, 1.0 / qd};
}

}  // namespace

HoroPointSet hecke_points(i64 q) {
  if (q < 2) throw DomainError("hecke_points needs q >= 2");
  HoroPointSet h;
  h.kind = HoroKind::discrete_single;
  h.q = q;
  h.points.reserve(static_cast<std::size_t>(q));
  for (i64 a = 0; a < q; ++a) h.points.push_back(low_point(a, q));
  return h;
}

HoroPointSet pair_points(i64 q, i64 b) {
  if (q < 2) throw DomainError("pair_points needs q >= 2");
  require_unit(b, q);
  HoroPointSet h;
  h.kind = HoroKind::discrete_pair;
  h.q = q;
  h.shifts = {floor_mod(b, q)};
  h.dim = 2;
  h.points.reserve(2 * static_cast<std::size_t>(q));
  for (i64 a = 0; a < q; ++a) {
    h.points.push_back(low_point(a, q));
    h.points.push_back(low_point(mulmod(a, b, q), q));
  }
  return h;
}

TuplePoints tuple_points(i64 q, const std::vector<i64>& b) {
  if (q < 2) throw DomainError("tuple_points needs q >= 2");
  if (b.size() < 2) throw DomainError("tuple_points needs at least two shifts");
  for (i64 bi : b) require_unit(bi, q);
  TuplePoints t;
  t.set.kind = HoroKind::discrete_tuple;
  t.set.q = q;
  t.set.dim = b.size();
  for (i64 bi : b) t.set.shifts.push_back(floor_mod(bi, q));
  t.set.points.reserve(b.size() * static_cast<std::size_t>(q));
  for (i64 a = 0; a < q; ++a)
    for (i64 bi : b) t.set.points.push_back(low_point(mulmod(a, bi, q), q));
  t.s_squared = -1;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i == j) continue;
      const i64 ratio = mulmod(floor_mod(b[i], q), mod_inv(Residue(b[j], q)).value(), q);
      const i64 s2 = s_min_squared(q, ratio);
      if (t.s_squared < 0 || s2 < t.s_squared) t.s_squared = s2;
    }
  }
  return t;
}

HoroPointSet monomial_points(int k, int l, i64 q, i64 b) {
  if (k < 1 || k >= l) throw DomainError("monomial_points needs 1 <= k < l");
  if (q < 2) throw DomainError("monomial_points needs q >= 2");
  require_unit(b, q);
  HoroPointSet h;
  h.kind = HoroKind::monomial;
  h.q = q;
  h.shifts = {floor_mod(b, q)};
  h.dim = 2;
  h.points.reserve(2 * static_cast<std::size_t>(q));
  for (i64 a = 0; a < q; ++a) {
    h.points.push_back(low_point(powmod(a, static_cast<u64>(k), q), q));
    h.points.push_back(low_point(mulmod(floor_mod(b, q), powmod(a, static_cast<u64>(l), q), q), q));
  }
  return h;
}

WeylReport weyl_sum(const HoroPointSet& points, const std::vector<TestFunction>& phi,
                    const WorkerPool& pool) {
  if (phi.size() != points.dim) throw std::invalid_argument("weyl_sum needs one test function per coordinate");
  const auto t0 = std::chrono::steady_clock::now();
  WeylReport r;
  r.q = points.q;
  r.b = points.shifts;
  const std::size_t n = points.count();
  const auto total = deterministic_sum(pool, n, [&](std::size_t i) {
    double v = 1.0;
    for (std::size_t j = 0; j < points.dim; ++j) v *= phi[j](points.at(i, j));
    return v;
  });
  r.value = total / static_cast<double>(n);
  r.target = 1.0;
  for (const auto& f : phi) r.target *= f.mean();
  r.abs_error = std::abs(r.value - r.target);
  if (points.kind == HoroKind::discrete_pair) {
    r.s = s_min(points.q, points.shifts[0]);
  } else if (points.kind == HoroKind::discrete_tuple) {
    double best = -1;
    for (std::size_t i = 0; i < points.shifts.size(); ++i)
      for (std::size_t j = 0; j < points.shifts.size(); ++j)
        if (i != j) {
          const i64 ratio = mulmod(points.shifts[i], mod_inv(Residue(points.shifts[j], points.q)).value(), points.q);
          const double s = s_min(points.q, ratio);
          if (best < 0 || s < best) best = s;
        }
    r.s = best;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

WeylReport weyl_sum(const HoroPointSet& points, const TestFunction& phi1, const TestFunction& phi2,
                    const WorkerPool& pool) {
  return weyl_sum(points, std::vector<TestFunction>{phi1, phi2}, pool);
}

std::complex<double> weyl_sum_general(i64 q, i64 b, const AutomorphicFn& f1, const AutomorphicFn& f2,
                                      double x0, double y0, Rational r0, const WorkerPool& pool) {
  if (q < 2) throw DomainError("weyl_sum_general needs q >= 2");
  require_unit(b, q);
  if (y0 == 0.0) throw DomainError("weyl_sum_general needs y0 != 0");
  if (r0.den <= 0 || gcd(r0.den, q) != 1)
    throw DomainError("denominator of r0 must be positive and coprime to q");
  const double qd = static_cast<double>(q);
  const double shift = r0.value();
  const auto total = deterministic_sum(pool, static_cast<std::size_t>(q), [&](std::size_t i) {
    const i64 a = static_cast<i64>(i);
    const HalfPlanePoint z1 = low_point(a, q);
    const HalfPlanePoint z2{(static_cast<double>(mulmod(a, b, q)) + x0) / qd + shift, std::abs(y0) / qd};
    return f1(z1) * f2(z2);
  });
  return total / qd;
}

double box_measure(const Box& box) {
  if (!(box.x1 < box.x2 && box.y1 < box.y2) || box.x1 < -0.5 || box.x2 > 0.5)
    throw DomainError("box must satisfy -1/2 <= x1 < x2 <= 1/2 and y1 < y2");
  const double xmin2 = (box.x1 <= 0.0 && box.x2 >= 0.0) ? 0.0 : std::min(box.x1 * box.x1, box.x2 * box.x2);
  if (box.y1 * box.y1 + xmin2 < 1.0 - 1e-15) throw DomainError("box leaves the fundamental domain");
  return 3.0 / pi * (box.x2 - box.x1) * (1.0 / box.y1 - 1.0 / box.y2);
}

namespace {

struct Grid {
  int cells;  // per axis
  double ymax;
  // index of the cell containing a reduced point, or -1 outside [1, ymax)
  int index(const HalfPlanePoint& z) const {
    if (z.y < 1.0 || z.y >= ymax) return -1;
    int ix = static_cast<int>(std::floor((z.x + 0.5) * cells));
    ix = std::clamp(ix, 0, cells - 1);
    int iy = static_cast<int>(std::floor(std::log(z.y) / std::log(ymax) * cells));
    iy = std::clamp(iy, 0, cells - 1);
    return iy * cells + ix;
  }
  Box box(int idx) const {
    const int ix = idx % cells, iy = idx / cells;
    return {-0.5 + static_cast<double>(ix) / cells, -0.5 + static_cast<double>(ix + 1) / cells,
            std::pow(ymax, static_cast<double>(iy) / cells), std::pow(ymax, static_cast<double>(iy + 1) / cells)};
  }
};

}  // namespace

DiscrepancyReport discrepancy(const HoroPointSet& points, const BoxFamily& family) {
  if (points.dim > 2) throw DomainError("discrepancy supports single points and pairs");
  if (!(family.ymax > 1.0) || family.levels < 1) throw DomainError("invalid box family");
  const std::size_t n = points.count();
  std::vector<HalfPlanePoint> reduced(points.points.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) reduced[i] = fd_reduce(points.points[i]).point;

  DiscrepancyReport rep;
  rep.cusp_mass_bound = 3.0 / pi / family.ymax;
  for (int level = 0; level < family.levels; ++level) {
    const Grid g{1 << level, family.ymax};
    const int cells = g.cells * g.cells;
    std::vector<double> mu(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c) mu[c] = box_measure(g.box(c));
    if (points.dim == 1) {
      std::vector<std::size_t> hist(static_cast<std::size_t>(cells), 0);
      for (std::size_t i = 0; i < n; ++i) {
        const int c = g.index(reduced[i]);
        if (c >= 0) ++hist[c];
      }
      for (int c = 0; c < cells; ++c) {
        const double d = std::abs(static_cast<double>(hist[c]) / static_cast<double>(n) - mu[c]);
        if (d > rep.value) {
          rep.value = d;
          rep.worst_box = g.box(c);
        }
      }
    } else {
      std::vector<std::size_t> hist(static_cast<std::size_t>(cells) * cells, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const int c1 = g.index(reduced[2 * i]);
        const int c2 = g.index(reduced[2 * i + 1]);
        if (c1 >= 0 && c2 >= 0) ++hist[static_cast<std::size_t>(c1) * cells + c2];
      }
      for (int c1 = 0; c1 < cells; ++c1)
        for (int c2 = 0; c2 < cells; ++c2) {
          const double emp = static_cast<double>(hist[static_cast<std::size_t>(c1) * cells + c2]) / static_cast<double>(n);
          const double d = std::abs(emp - mu[c1] * mu[c2]);
          if (d > rep.value) {
            rep.value = d;
            rep.worst_box = g.box(c1);
            rep.worst_box2 = g.box(c2);
          }
        }
    }
  }
  return rep;
}

double discrepancy(const HoroPointSet& points, const std::vector<Box>& boxes) {
  if (points.dim != 1) throw DomainError("explicit box families need a single-point set");
  std::vector<HalfPlanePoint> reduced(points.points.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) reduced[i] = fd_reduce(points.points[i]).point;
  double worst = 0.0;
  for (const Box& b : boxes) {
    const double mu = box_measure(b);
    std::size_t hits = 0;
    for (const auto& z : reduced)
      if (z.x >= b.x1 && z.x < b.x2 && z.y >= b.y1 && z.y < b.y2) ++hits;
    worst = std::max(worst, std::abs(static_cast<double>(hits) / static_cast<double>(reduced.size()) - mu));
  }
  return worst;
}

ContinuousReport continuous_pair_integral(const ContinuousConfig& cfg, const AutomorphicFn& f1,
                                          const AutomorphicFn& f2, const WorkerPool& pool) {
  if (!(cfg.T > 1.0)) throw DomainError("continuous_pair_integral needs T > 1");
  if (!(cfg.y > 0.0)) throw DomainError("continuous_pair_integral needs y > 0");
  if (!(cfg.interval_hi > cfg.interval_lo)) throw DomainError("empty interval");
  if (cfg.y0 == 0.0) throw DomainError("continuous_pair_integral needs y0 != 0");
  constexpr unsigned kOrder = 20;
  const double width = cfg.interval_hi - cfg.interval_lo;
  const std::size_t nodes = cfg.n_nodes ? cfg.n_nodes : static_cast<std::size_t>(std::ceil(160.0 * cfg.T * width));
  if (width / static_cast<double>(nodes) > 1.0 / (4.0 * cfg.T))
    throw ResolutionError("node spacing " + std::to_string(width / static_cast<double>(nodes)) +
                          " exceeds 1/(4T)");
  const std::size_t panels = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(8.0 * cfg.T * width)), (nodes + kOrder - 1) / kOrder);

  const Bump W{cfg.interval_lo, cfg.interval_hi};
  const double h = width / static_cast<double>(panels);
  using rule = boost::math::quadrature::gauss<double, kOrder>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  auto integrand = [&](double x) -> std::complex<double> {
    const double w = W(x);
    if (w == 0.0) return 0.0;
    const HalfPlanePoint z1{x, 1.0 / cfg.T};
    const HalfPlanePoint z2{x * cfg.y + cfg.r0 + cfg.x0 / cfg.T, std::abs(cfg.y0) / cfg.T};
    return w * f1(z1) * f2(z2);
  };
  const auto total = deterministic_sum(pool, panels, [&](std::size_t k) {
    const double mid = cfg.interval_lo + h * (static_cast<double>(k) + 0.5);
    // boost stores the non-negative half of the symmetric rule
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < abscissa.size(); ++j) {
      const double dx = 0.5 * h * abscissa[j];
      acc += dx == 0.0 ? weights[j] * integrand(mid)
                       : weights[j] * (integrand(mid - dx) + integrand(mid + dx));
    }
    return 0.5 * h * acc;
  });

  ContinuousReport rep;
  rep.value = total;
  rep.Q = static_cast<i64>(std::floor(std::pow(cfg.T, cfg.q_exponent)));
  rep.approx = best_rational(cfg.y, std::max<i64>(rep.Q, 1));
  rep.panels = panels;
  rep.nodes = panels * kOrder;
  rep.small_denominator = rep.approx.denominator <= cfg.small_denominator;
  return rep;
}

}  // namespace horolab
