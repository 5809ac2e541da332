#include "horolab/heckeforms.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "horolab/quadforms_cm.hpp"
#include "horolab/special.hpp"
#include "ntt.hpp"

namespace horolab {

namespace bq = boost::math::quadrature;
using std::numbers::pi;

std::string to_string(FormKind kind) {
  switch (kind) {
    case FormKind::holomorphic_level1: return "holomorphic-level-1";
    case FormKind::cm_theta: return "cm-theta";
    case FormKind::loaded_maass: return "loaded-maass";
    case FormKind::eisenstein_divisor: return "eisenstein-divisor";
    case FormKind::synthetic: return "synthetic";
  }
  return "unknown";
}

// ---------------------------------------------------------------- tau

std::vector<i128> ramanujan_tau(i64 N, const WorkerPool& pool) {
  if (N < 1) throw std::invalid_argument("ramanujan_tau needs N >= 1");
  if (N > (i64{1} << 21)) throw std::length_error("ramanujan_tau supports N <= 2^21");
  const auto len = static_cast<std::size_t>(N);  // degrees 0..N-1 of prod(1-q^n)^24
  const auto& primes = detail::ntt_primes();

  std::vector<std::vector<std::uint32_t>> residues(primes.size());
  pool.parallel_for(primes.size(), [&](std::size_t i) {
    const auto& pr = primes[i];
    const std::uint32_t p = pr.modulus;
    std::vector<std::uint32_t> e(len, 0);
    // Jacobi: prod (1 - q^n)^3 = sum_k (-1)^k (2k + 1) q^{k(k+1)/2}
    std::vector<std::uint32_t> e3(len, 0);
    for (i64 k = 0; k * (k + 1) / 2 < N; ++k) {
      const u64 c = static_cast<u64>(2 * k + 1) % p;
      e3[static_cast<std::size_t>(k * (k + 1) / 2)] = static_cast<std::uint32_t>(k % 2 == 0 ? c : (p - c) % p);
    }
    auto e6 = detail::square_mod(e3, len, pr);
    auto e12 = detail::square_mod(e6, len, pr);
    residues[i] = detail::square_mod(e12, len, pr);
  });

  // Garner reconstruction of tau + 2^126, which lies in [0, 2^127)
  const std::size_t np = primes.size();
  const u128 offset = static_cast<u128>(1) << 126;
  std::vector<u64> offset_mod(np);
  for (std::size_t i = 0; i < np; ++i) offset_mod[i] = static_cast<u64>(offset % primes[i].modulus);
  // inv[i][j] = m_j^{-1} mod m_i for j < i
  std::vector<std::vector<u64>> inv(np, std::vector<u64>(np, 0));
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < i; ++j)
      inv[i][j] = static_cast<u64>(
          mod_inv(Residue(primes[j].modulus, primes[i].modulus)).value());

  std::vector<i128> tau(len + 1, 0);
  pool.parallel_for((len + kReductionChunk - 1) / kReductionChunk, [&](std::size_t chunk) {
    const std::size_t lo = chunk * kReductionChunk;
    const std::size_t hi = std::min(len, lo + kReductionChunk);
    std::vector<u64> digit(np);
    for (std::size_t n = lo; n < hi; ++n) {
      for (std::size_t i = 0; i < np; ++i) {
        const u64 m = primes[i].modulus;
        u64 x = (residues[i][n] + offset_mod[i]) % m;
        for (std::size_t j = 0; j < i; ++j) {
          x = (x + m - digit[j] % m) % m;
          x = x * inv[i][j] % m;
        }
        digit[i] = x;
      }
      u128 value = 0, radix = 1;
      for (std::size_t i = 0; i < np; ++i) {
        value += radix * digit[i];
        radix *= primes[i].modulus;
      }
      if (value >= (static_cast<u128>(1) << 127))
        throw std::overflow_error("tau reconstruction out of range");
      tau[n + 1] = static_cast<i128>(value) - static_cast<i128>(offset);
    }
  });
  return tau;
}

CoeffTable tau_table(i64 N, const WorkerPool& pool) {
  const auto tau = ramanujan_tau(N, pool);
  CoeffTable t;
  t.N = N;
  t.kind = FormKind::holomorphic_level1;
  t.weight_or_t = 12;
  t.lam.assign(static_cast<std::size_t>(N) + 1, 0.0);
  for (i64 n = 1; n <= N; ++n) {
    const long double v = static_cast<long double>(tau[n]) / std::pow(static_cast<long double>(n), 5.5L);
    t.lam[n] = static_cast<double>(v);
  }
  return t;
}

// ---------------------------------------------------------------- tables

CoeffTable hecke_extend(const std::unordered_map<i64, double>& prime_values, i64 N,
                        const PrimeCharacter& chi) {
  if (N < 1) throw std::invalid_argument("hecke_extend needs N >= 1");
  const FactorTable ft(std::max<i64>(N, 2));
  CoeffTable t;
  t.N = N;
  t.lam.assign(static_cast<std::size_t>(N) + 1, 0.0);
  t.lam[1] = 1.0;
  for (i64 n = 2; n <= N; ++n) {
    const i64 p = ft.smallest_prime_factor(n);
    i64 pk = 1, k = 0, m = n;
    while (m % p == 0) {
      m /= p;
      pk *= p;
      ++k;
    }
    if (m > 1) {
      t.lam[n] = t.lam[pk] * t.lam[m];
    } else if (k == 1) {
      const auto it = prime_values.find(p);
      if (it == prime_values.end())
        throw std::invalid_argument("hecke_extend: missing value at prime " + std::to_string(p));
      t.lam[n] = it->second;
    } else {
      const double c = chi ? chi(p) : 1.0;
      t.lam[n] = t.lam[p] * t.lam[n / p] - c * t.lam[n / (p * p)];
    }
  }
  return t;
}

std::vector<std::uint32_t> divisor_counts(i64 N) {
  std::vector<std::uint32_t> d(static_cast<std::size_t>(N) + 1, 0);
  for (i64 a = 1; a <= N; ++a)
    for (i64 m = a; m <= N; m += a) ++d[m];
  return d;
}

CoeffTable divisor_table(i64 N) {
  const auto d = divisor_counts(N);
  CoeffTable t;
  t.N = N;
  t.kind = FormKind::eisenstein_divisor;
  t.lam.assign(d.begin(), d.end());
  return t;
}

CoeffTable cm_theta_table(i64 D, i64 char_index, i64 N) {
  if (D >= 0 || !is_fundamental_discriminant(D))
    throw DomainError("cm_theta_table needs a negative fundamental discriminant");
  const ClassGroupData g = class_number_definite(D);
  if (!g.generator) throw DomainError("class group of discriminant " + std::to_string(D) + " is not cyclic");
  const i64 h = g.class_number;
  std::map<QuadForm, i64> exponent;
  QuadForm acc = reduce_definite(principal_form(D));
  for (i64 j = 0; j < h; ++j) {
    exponent[acc] = j;
    acc = reduce_definite(compose(acc, *g.generator));
  }
  const double w = D == -3 ? 6.0 : D == -4 ? 4.0 : 2.0;

  std::vector<double> a(static_cast<std::size_t>(N) + 1, 0.0);
  for (const QuadForm& f : g.representatives) {
    const double weight = std::cos(2.0 * pi * static_cast<double>(exponent.at(f) * char_index % h) / static_cast<double>(h)) / w;
    const i64 ymax = static_cast<i64>(std::sqrt(4.0 * static_cast<double>(f.a) * static_cast<double>(N) / static_cast<double>(-D))) + 1;
    for (i64 y = -ymax; y <= ymax; ++y) {
      const double centre = -static_cast<double>(f.b * y) / (2.0 * static_cast<double>(f.a));
      const double rest = (static_cast<double>(N) + static_cast<double>(D) * static_cast<double>(y * y) / (4.0 * static_cast<double>(f.a))) / static_cast<double>(f.a);
      if (rest < -1.0) continue;
      const double half = std::sqrt(std::max(rest, 0.0));
      for (i64 x = static_cast<i64>(std::floor(centre - half)) - 1; x <= static_cast<i64>(std::ceil(centre + half)) + 1; ++x) {
        const i128 v = f.eval(x, y);
        if (v >= 1 && v <= N) a[static_cast<std::size_t>(v)] += weight;
      }
    }
  }
  CoeffTable t;
  t.N = N;
  t.kind = FormKind::cm_theta;
  t.weight_or_t = 1;
  t.conductor = -D;
  t.lam = std::move(a);
  t.lam[0] = 0.0;
  return t;
}

TableAudit audit_table(const CoeffTable& table, std::uint64_t seed, int pairs) {
  TableAudit r;
  r.lambda_one = table.N >= 1 && std::abs(table.lam[1] - 1.0) <= 1e-12;
  std::mt19937_64 rng(seed);
  const i64 N = table.N;
  const i64 mmax = static_cast<i64>(std::sqrt(static_cast<double>(N)));
  if (mmax >= 2) {
    int guard = 0;
    while (r.pairs_checked < pairs && guard++ < 100 * pairs) {
      const i64 m = std::uniform_int_distribution<i64>(2, mmax)(rng);
      const i64 n = std::uniform_int_distribution<i64>(2, N / m)(rng);
      if (gcd(m, n) != 1) continue;
      ++r.pairs_checked;
      const double prod = table.lam[m] * table.lam[n];
      if (std::abs(table.lam[m * n] - prod) > 1e-9 * std::max(1.0, std::abs(prod)))
        ++r.multiplicative_failures;
    }
  }
  if (table.satisfies_ramanujan()) {
    const auto d = divisor_counts(N);
    for (i64 n = 1; n <= N; ++n)
      if (std::abs(table.lam[n]) > static_cast<double>(d[n]) * (1 + 1e-9)) ++r.ramanujan_failures;
  }
  return r;
}

// ---------------------------------------------------------------- half plane

HalfPlanePoint apply(const Mat2& g, HalfPlanePoint z) {
  const long double x = z.x, y = z.y;
  const long double cx = g.c * x + g.d, cy = g.c * y;
  const long double den = cx * cx + cy * cy;
  const long double re = ((g.a * x + g.b) * cx + static_cast<long double>(g.a) * g.c * y * y) / den;
  return {static_cast<double>(re), static_cast<double>(y / den)};
}

FdReduction fd_reduce(HalfPlanePoint z) {
  if (!(z.y > 0)) throw DomainError("fd_reduce needs y > 0");
  long double x = z.x, y = z.y;
  Mat2 g;
  for (int guard = 0; guard < 100000; ++guard) {
    const long double n = std::nearbyint(x);
    if (n != 0) {
      x -= n;
      g = Mat2{1, -static_cast<i64>(n), 0, 1} * g;
    }
    const long double r2 = x * x + y * y;
    if (r2 >= 1) break;
    x = -x / r2;
    y = y / r2;
    g = Mat2{0, -1, 1, 0} * g;
  }
  return {{static_cast<double>(x), static_cast<double>(y)}, g};
}

// ---------------------------------------------------------------- Delta

namespace {

const std::vector<double>& small_tau() {
  static const std::vector<double> table = [] {
    const auto t = ramanujan_tau(256);
    return std::vector<double>(t.begin(), t.end());
  }();
  return table;
}

}  // namespace

double eval_delta_density(HalfPlanePoint z, double tol) {
  const HalfPlanePoint w = fd_reduce(z).point;
  const auto& tau = small_tau();
  const double r = std::exp(-2.0 * pi * w.y);
  const double y12 = std::pow(w.y, 12.0);
  double re = 0.0, im = 0.0, rn = 1.0;
  for (std::size_t n = 1; n < tau.size(); ++n) {
    rn *= r;
    const double ang = 2.0 * pi * static_cast<double>(n) * w.x;
    re += tau[n] * rn * std::cos(ang);
    im += tau[n] * rn * std::sin(ang);
    // |tau(m)| <= d(m) m^{11/2} <= 2 m^6; the bound's ratio is below 1/2 here
    const double m = static_cast<double>(n + 1);
    const double next = 2.0 * std::pow(m, 6.0) * rn * r;
    const double ratio = std::pow((m + 1) / m, 6.0) * r;
    const double tail = ratio < 0.5 ? next / (1.0 - ratio) : INFINITY;
    const double mod = std::hypot(re, im);
    if (y12 * (2.0 * mod * tail + tail * tail) <= tol) return y12 * (re * re + im * im);
  }
  throw TruncationError("eval_delta_density: tolerance not reached");
}

double delta_density_mean() {
  static const double mean = [] {
    auto inner = [](double x) {
      const double ylo = std::sqrt(1.0 - x * x);
      auto f = [x](double y) { return eval_delta_density({x, y}, 1e-16) / (y * y); };
      return bq::gauss_kronrod<double, 61>::integrate(f, ylo, 1.5, 10, 1e-13) +
             bq::gauss_kronrod<double, 61>::integrate(f, 1.5, 8.0, 10, 1e-13);
    };
    const double half = bq::gauss_kronrod<double, 61>::integrate(inner, 0.0, 0.5, 10, 1e-12);
    return 3.0 / pi * 2.0 * half;
  }();
  return mean;
}

// ---------------------------------------------------------------- incomplete Eisenstein

double Bump::operator()(double y) const {
  if (!(y > y0 && y < y1)) return 0.0;
  const double u = (2.0 * y - y0 - y1) / (y1 - y0);
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double incomplete_eisenstein(HalfPlanePoint z, const Bump& psi) {
  if (!(psi.y0 > 0 && psi.y1 > psi.y0)) throw DomainError("bump needs 0 < y0 < y1");
  const HalfPlanePoint w = fd_reduce(z).point;
  double total = psi(w.y);
  const double reach = w.y / psi.y0;  // |cz + d|^2 must not exceed this
  const i64 cmax = static_cast<i64>(std::floor(std::sqrt(reach) / w.y));
  for (i64 c = 1; c <= cmax; ++c) {
    const double cy = static_cast<double>(c) * w.y;
    const double room = reach - cy * cy;
    if (room < 0) break;
    const double half = std::sqrt(room);
    const double cx = static_cast<double>(c) * w.x;
    for (i64 d = static_cast<i64>(std::floor(-cx - half)); d <= static_cast<i64>(std::ceil(-cx + half)); ++d) {
      if (gcd(c, d) != 1) continue;
      const double re = cx + static_cast<double>(d);
      total += psi(w.y / (re * re + cy * cy));
    }
  }
  return total;
}

double incomplete_eisenstein_mean(const Bump& psi) {
  auto f = [&](double y) { return psi(y) / (y * y); };
  return 3.0 / pi * bq::gauss_kronrod<double, 61>::integrate(f, psi.y0, psi.y1, 15, 1e-14);
}

// ---------------------------------------------------------------- Maass

MaassData load_maass_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Maass coefficient file " + path);
  MaassData data;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  {
    std::istringstream hs(line);
    std::string tkey, ekey;
    if (!(hs >> tkey >> data.t >> ekey >> data.eps) || tkey != "t" || ekey != "eps" ||
        (data.eps != 1 && data.eps != -1))
      throw std::runtime_error(path + ": header must read 't <value> eps <+1|-1>'");
  }
  data.table.kind = FormKind::loaded_maass;
  data.table.weight_or_t = data.t;
  data.table.lam.push_back(0.0);
  i64 expected = 1;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    i64 n;
    double v;
    if (!(ls >> n)) continue;  // blank line
    if (!(ls >> v)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing value");
    if (n != expected)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected n = " +
                               std::to_string(expected) + ", found " + std::to_string(n));
    data.table.lam.push_back(v);
    ++expected;
  }
  data.table.N = expected - 1;
  if (data.table.N < 1) throw std::runtime_error(path + ": no coefficients");
  return data;
}

double maass_eval(const CoeffTable& table, double t, int eps, HalfPlanePoint z, double c) {
  if (eps != 1 && eps != -1) throw DomainError("maass_eval needs eps = +1 or -1");
  const HalfPlanePoint w = fd_reduce(z).point;
  const double turning = std::abs(t) / (2.0 * pi) + 1.0;
  double total = 0.0;
  for (i64 n = 1;; ++n) {
    const double arg = static_cast<double>(n) * w.y;
    const double k = k_bessel_star(t, arg);
    if (arg > turning && std::abs(k) < 1e-14) break;
    if (n > table.N)
      throw TruncationError("maass_eval: table of length " + std::to_string(table.N) +
                            " too short at y = " + std::to_string(w.y));
    const double ang = 2.0 * pi * static_cast<double>(n) * w.x;
    const double osc = eps == 1 ? 2.0 * std::cos(ang) : 2.0 * std::sin(ang);
    total += table.lam[n] * k * osc;
  }
  return c * std::sqrt(w.y) * total;
}

// ---------------------------------------------------------------- TestFunction

TestFunction TestFunction::constant(double value) {
  TestFunction f;
  f.kind_ = Kind::constant;
  f.value_ = value;
  f.mean_ = value;
  return f;
}

TestFunction TestFunction::delta_density(double tol) {
  TestFunction f;
  f.kind_ = Kind::delta;
  f.tol_ = tol;
  f.mean_ = delta_density_mean();
  return f;
}

TestFunction TestFunction::eisenstein(Bump psi) {
  TestFunction f;
  f.kind_ = Kind::eisenstein;
  f.psi_ = psi;
  f.mean_ = incomplete_eisenstein_mean(psi);
  return f;
}

TestFunction TestFunction::maass(std::shared_ptr<const MaassData> data, double c) {
  TestFunction f;
  f.kind_ = Kind::maass;
  f.maass_ = std::move(data);
  f.value_ = c;
  f.mean_ = 0.0;
  return f;
}

TestFunction TestFunction::centered() const {
  TestFunction f = *this;
  f.shift_ = mean_;
  return f;
}

double TestFunction::operator()(HalfPlanePoint z) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::constant: v = value_; break;
    case Kind::delta: v = eval_delta_density(z, tol_); break;
    case Kind::eisenstein: v = incomplete_eisenstein(z, psi_); break;
    case Kind::maass: v = maass_eval(maass_->table, maass_->t, maass_->eps, z, value_); break;
  }
  return v - shift_;
}

std::string TestFunction::name() const {
  std::string base;
  switch (kind_) {
    case Kind::constant: base = "constant"; break;
    case Kind::delta: base = "delta"; break;
    case Kind::eisenstein: base = "eisenstein"; break;
    case Kind::maass: base = "maass"; break;
  }
  return shift_ != 0.0 ? base + "-centered" : base;
}

}  // namespace horolab
