#include "horolab/expsums.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "horolab/special.hpp"

namespace horolab {

using std::numbers::pi;

// ---------------------------------------------------------------- Kloosterman

KloostermanTable::KloostermanTable(i64 q) : q_(q) {
  if (q < 1) throw DomainError("Kloosterman modulus must be positive");
  if (q > (i64{1} << 31)) throw DomainError("Kloosterman modulus too large for table evaluation");
  cos_.resize(static_cast<std::size_t>(q));
  sin_.resize(static_cast<std::size_t>(q));
  for (i64 k = 0; k < q; ++k) {
    const double ang = 2.0 * pi * static_cast<double>(k) / static_cast<double>(q);
    cos_[k] = std::cos(ang);
    sin_[k] = std::sin(ang);
  }
  for (i64 x = 0; x < q; ++x) {
    if (gcd(x, q) != 1) continue;
    units_.push_back(x);
    inverses_.push_back(mod_inv(Residue(x, q)).value());
  }
}

std::complex<double> KloostermanTable::complex_sum(i64 a, i64 b) const {
  const i64 ar = floor_mod(a, q_), br = floor_mod(b, q_);
  CompensatedSum re, im;
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const i64 k = (ar * units_[i] + br * inverses_[i]) % q_;
    re.add(cos_[k]);
    im.add(sin_[k]);
  }
  return {re.value(), im.value()};
}

double KloostermanTable::operator()(i64 a, i64 b) const {
  const auto v = complex_sum(a, b);
  if (std::abs(v.imag()) > 1e-9)
    throw NumericalError("Kloosterman sum has imaginary part " + std::to_string(v.imag()));
  return v.real();
}

double kloosterman(i64 a, i64 b, i64 q) { return KloostermanTable(q)(a, b); }

KloostermanAverageReport kloosterman_average(const KloostermanAverageConfig& cfg, const WorkerPool& pool) {
  if (cfg.H < 1 || cfg.S < 1 || cfg.Q < 1 || cfg.d < 1 || cfg.N < 1)
    throw DomainError("kloosterman_average needs positive H, S, Q, d, N");
  if (cfg.sign != 1 && cfg.sign != -1) throw DomainError("sign must be +1 or -1");
  std::vector<i64> hs, ss, qs;
  for (i64 h = cfg.H; h <= 2 * cfg.H; ++h)
    if (h % cfg.d == 0 && gcd(cfg.d, h / cfg.d) == 1) hs.push_back(h);
  for (i64 s = cfg.S; s <= 2 * cfg.S; ++s) ss.push_back(s);
  for (i64 q = cfg.Q; q <= 2 * cfg.Q; ++q)
    if (q % cfg.N == 0) qs.push_back(q);
  if (hs.empty() || qs.empty()) throw DomainError("kloosterman_average: empty summation range");

  auto a = [&](i64 h) { return cfg.a ? cfg.a(h) : std::complex<double>(1.0); };
  auto b = [&](i64 s) { return cfg.b ? cfg.b(s) : std::complex<double>(1.0); };
  auto u = [&](i64 h, i64 s, i64 q) { return cfg.u ? cfg.u(h, s, q) : 1.0; };

  std::vector<std::complex<double>> partial(qs.size());
  pool.parallel_for(qs.size(), [&](std::size_t i) {
    const i64 q = qs[i];
    const KloostermanTable table(q);
    CompensatedComplexSum acc;
    for (i64 h : hs)
      for (i64 s : ss) acc.add(a(h) * b(s) * (table(cfg.sign * h, s) * u(h, s, q)));
    partial[i] = acc.value();
  });
  KloostermanAverageReport r;
  CompensatedComplexSum total;
  for (const auto& p : partial) total.add(p);
  r.value = total.value();
  r.terms = static_cast<i64>(hs.size() * ss.size() * qs.size());

  double a2 = 0.0, b2 = 0.0;
  for (i64 h : hs) a2 += std::norm(a(h));
  for (i64 s : ss) b2 += std::norm(b(s));
  const double H = static_cast<double>(cfg.H), S = static_cast<double>(cfg.S), Q = static_cast<double>(cfg.Q);
  const double N = static_cast<double>(cfg.N), d = static_cast<double>(cfg.d);
  r.envelope = Q * std::sqrt(b2) * std::sqrt(1.0 + H * S / (Q * Q) + S / N) * std::pow(d, cfg.theta) *
               std::sqrt(a2) * std::sqrt(1.0 + (H / d) / (N * (1.0 + H * S / (Q * Q)))) *
               (1.0 + std::pow(H * S / Q, -cfg.theta));
  r.ratio = r.envelope > 0 ? std::abs(r.value) / r.envelope : 0.0;
  return r;
}

// ---------------------------------------------------------------- shifted convolution

std::complex<double> shifted_convolution(const CoeffTable& lam1, const CoeffTable& lam2, i64 l1, i64 l2,
                                         int sign, i64 h, const Window& G, i64 M1, i64 M2) {
  if (l1 < 1 || l2 < 1 || M1 < 1 || M2 < 1) throw DomainError("shifted_convolution needs positive l_i, M_i");
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  CompensatedComplexSum acc;
  for (i64 m1 = M1; m1 <= 2 * M1; ++m1) {
    // l1 m1 + sign l2 m2 = h
    const i64 rest = (h - l1 * m1) * sign;
    if (rest % l2 != 0) continue;
    const i64 m2 = rest / l2;
    if (m2 < M2 || m2 > 2 * M2) continue;
    acc.add(lam1(m1) * lam2(m2) * G(m1, m2));
  }
  return acc.value();
}

// ---------------------------------------------------------------- kernels

KernelG KernelG::bessel(double t1, double t2, double x0, double y0) {
  KernelG g;
  g.kind = Kind::bessel;
  g.t1 = t1;
  g.t2 = t2;
  g.x0 = x0;
  g.y0 = y0;
  return g;
}

KernelG KernelG::holomorphic(double k1, double k2, double x0, double y0) {
  KernelG g;
  g.kind = Kind::holomorphic;
  g.k1 = k1;
  g.k2 = k2;
  g.x0 = x0;
  g.y0 = y0;
  return g;
}

KernelG KernelG::gaussian(double x0, double y0) {
  KernelG g;
  g.kind = Kind::gaussian;
  g.x0 = x0;
  g.y0 = y0;
  return g;
}

double KernelG::first(double x1) const {
  const double x = std::max(std::abs(x1), floor);
  switch (kind) {
    case Kind::bessel: return 2.0 / std::sqrt(x) * k_bessel_star(t1, x);
    case Kind::holomorphic: return std::pow(x, (k1 - 1.0) / 2.0) * std::exp(-2.0 * pi * x);
    case Kind::gaussian: return std::exp(-pi * x * x);
  }
  return 0.0;
}

std::complex<double> KernelG::second(double x2) const {
  const double x = std::max(std::abs(x2), floor);
  const double ay = std::abs(y0);
  const std::complex<double> phase = std::polar(1.0, 2.0 * pi * x0 * x2);
  switch (kind) {
    case Kind::bessel: return phase * (2.0 / std::sqrt(x) * k_bessel_star(t2, ay * x));
    case Kind::holomorphic:
      return phase * (std::sqrt(ay) * std::pow(ay * x, (k2 - 1.0) / 2.0) * std::exp(-2.0 * pi * ay * x));
    case Kind::gaussian: return phase * std::exp(-pi * ay * ay * x * x);
  }
  return 0.0;
}

// ---------------------------------------------------------------- characters

DirichletCharacter DirichletCharacter::principal(i64 d0) {
  if (d0 < 1) throw DomainError("character modulus must be positive");
  DirichletCharacter c;
  c.modulus = d0;
  c.values.resize(static_cast<std::size_t>(d0));
  for (i64 n = 0; n < d0; ++n) c.values[n] = gcd(n, d0) == 1 ? 1.0 : 0.0;
  return c;
}

DirichletCharacter DirichletCharacter::prime(i64 p, i64 k) {
  if (p < 3 || !is_prime(static_cast<u64>(p))) throw DomainError("DirichletCharacter::prime needs an odd prime");
  const i64 g = primitive_root(p);
  DirichletCharacter c;
  c.modulus = p;
  c.values.assign(static_cast<std::size_t>(p), 0.0);
  i64 x = 1;
  for (i64 j = 0; j < p - 1; ++j) {
    c.values[x] = std::polar(1.0, 2.0 * pi * static_cast<double>(floor_mod(j * k, p - 1)) / static_cast<double>(p - 1));
    x = mulmod(x, g, p);
  }
  return c;
}

DirichletCharacter DirichletCharacter::product(const DirichletCharacter& a, const DirichletCharacter& b) {
  if (gcd(a.modulus, b.modulus) != 1) throw DomainError("character product needs coprime moduli");
  DirichletCharacter c;
  c.modulus = a.modulus * b.modulus;
  c.values.resize(static_cast<std::size_t>(c.modulus));
  for (i64 n = 0; n < c.modulus; ++n) c.values[n] = a(n) * b(n);
  return c;
}

DirichletCharacter DirichletCharacter::induced(i64 d0) const {
  if (d0 < 1 || d0 % modulus != 0) throw DomainError("induced modulus must be a multiple");
  DirichletCharacter c;
  c.modulus = d0;
  c.values.resize(static_cast<std::size_t>(d0));
  for (i64 n = 0; n < d0; ++n) c.values[n] = gcd(n, d0) == 1 ? (*this)(n) : 0.0;
  return c;
}

i64 conductor(const DirichletCharacter& chi) {
  for (i64 f : divisors(chi.modulus)) {
    bool ok = true;
    for (i64 n = 1; n < chi.modulus && ok; n += f)
      if (gcd(n, chi.modulus) == 1 && std::abs(chi(n) - 1.0) > 1e-9) ok = false;
    if (ok) return f;
  }
  return chi.modulus;
}

DirichletCharacter primitive_character(const DirichletCharacter& chi) {
  const i64 f = conductor(chi);
  DirichletCharacter c;
  c.modulus = f;
  c.values.assign(static_cast<std::size_t>(f), 0.0);
  for (i64 n = 0; n < f; ++n) {
    if (gcd(n, f) != 1) continue;
    i64 m = n;
    while (gcd(m, chi.modulus) != 1) m += f;
    c.values[n] = chi(m);
  }
  if (f == 1) c.values[0] = 1.0;
  return c;
}

PrimitiveReduction primitive_reduction(const DirichletCharacter& chi, const CoeffTable& lam2) {
  PrimitiveReduction r;
  r.primitive = primitive_character(chi);
  for (i64 f : divisors(chi.modulus)) {
    const int mf = moebius(f);
    if (mf == 0) continue;
    for (i64 g : divisors(f)) {
      const std::complex<double> c =
          static_cast<double>(mf * moebius(g)) * lam2(f / g) * r.primitive(f) * r.primitive(g);
      if (std::abs(c) == 0.0) continue;
      r.terms.push_back({f, g, c});
    }
  }
  return r;
}

// ---------------------------------------------------------------- lattice model

namespace {

i64 ceil_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a > 0) == (b > 0))) ++q;
  return q;
}
i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a > 0) != (b > 0))) --q;
  return q;
}

// u-range for lo <= u * x + c <= hi; returns false when empty
bool solve_range(i64 x, i64 c, i64 lo, i64 hi, i64& umin, i64& umax) {
  if (x == 0) return c >= lo && c <= hi;
  i64 a, b;
  if (x > 0) {
    a = ceil_div(lo - c, x);
    b = floor_div(hi - c, x);
  } else {
    a = ceil_div(hi - c, x);
    b = floor_div(lo - c, x);
  }
  umin = std::max(umin, a);
  umax = std::min(umax, b);
  return umin <= umax;
}

}  // namespace

LatticeModelReport weyl_lattice_model(const LatticeModelConfig& cfg, const CoeffTable& lam1,
                                      const CoeffTable& lam2, const DirichletCharacter* chi,
                                      const KernelG& G, const WorkerPool& pool) {
  const i64 q = cfg.q;
  if (q < 2) throw DomainError("weyl_lattice_model needs q >= 2");
  if (!(cfg.C > 0)) throw DomainError("cutoff C must be positive");
  if (cfg.multiplier < 1) throw DomainError("multiplier must be positive");
  const double cq = cfg.C * static_cast<double>(q);
  const i64 B1 = static_cast<i64>(std::floor(cq));
  const i64 B2 = static_cast<i64>(std::floor(cq / static_cast<double>(cfg.multiplier)));
  if (lam1.N < B1 || lam2.N < B2)
    throw TruncationError("weyl_lattice_model needs tables of length " + std::to_string(B1) + " and " +
                          std::to_string(B2));

  LatticeModelReport rep;
  rep.basis = gauss_reduce(lambda_lattice(q, cfg.b, cfg.sign));

  KernelG g = G;
  g.floor = 1.0 / cq;
  const double qd = static_cast<double>(q);
  std::vector<double> w1(static_cast<std::size_t>(B1) + 1, 0.0);
  std::vector<std::complex<double>> w2(static_cast<std::size_t>(B2) + 1, 0.0);
  for (i64 n = 1; n <= B1; ++n) w1[n] = lam1.lam[n] * g.first(static_cast<double>(n) / qd);
  for (i64 n = 1; n <= B2; ++n) {
    const std::complex<double> c = chi ? (*chi)(n) : 1.0;
    if (c == 0.0 || lam2.lam[n] == 0.0) continue;
    w2[n] = lam2.lam[n] * c * g.second(static_cast<double>(cfg.multiplier * n) / qd);
  }

  const Vec2 x = rep.basis.x, y = rep.basis.y;
  // n = u x + v y has det(x, n) = v det(x, y) = +-v q
  const i64 vmax = (std::abs(x.x) * B2 + std::abs(x.y) * B1) / q + 1;
  const std::size_t nv = static_cast<std::size_t>(2 * vmax + 1);
  const std::size_t chunks = (nv + kReductionChunk - 1) / kReductionChunk;
  std::vector<std::complex<double>> part_all(chunks), part_shell(chunks);
  std::vector<i64> part_count(chunks, 0);
  const i64 half1 = B1 / 2;
  const double half2 = cq / 2.0;
  pool.parallel_for(chunks, [&](std::size_t ch) {
    CompensatedComplexSum all, shell;
    i64 count = 0;
    const std::size_t lo = ch * kReductionChunk, hi = std::min(nv, lo + kReductionChunk);
    for (std::size_t iv = lo; iv < hi; ++iv) {
      const i64 v = static_cast<i64>(iv) - vmax;
      i64 umin = std::numeric_limits<i64>::min() / 4, umax = std::numeric_limits<i64>::max() / 4;
      if (!solve_range(x.x, v * y.x, 1, B1, umin, umax)) continue;
      if (!solve_range(x.y, v * y.y, 1, B2, umin, umax)) continue;
      if (x.x == 0 && x.y == 0) continue;
      std::complex<double> inner = 0.0, inner_shell = 0.0;
      for (i64 u = umin; u <= umax; ++u) {
        const i64 n1 = u * x.x + v * y.x;
        const i64 n2 = u * x.y + v * y.y;
        const std::complex<double> t = w1[n1] * w2[n2];
        inner += t;
        if (n1 > half1 || static_cast<double>(cfg.multiplier * n2) > half2) inner_shell += t;
        ++count;
      }
      all.add(inner);
      shell.add(inner_shell);
    }
    part_all[ch] = all.value();
    part_shell[ch] = shell.value();
    part_count[ch] = count;
  });
  CompensatedComplexSum all, shell;
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    all.add(part_all[ch]);
    shell.add(part_shell[ch]);
    rep.points += part_count[ch];
  }
  rep.value = all.value() / qd;
  rep.shell = shell.value() / qd;
  return rep;
}

std::complex<double> weyl_lattice_model_primitive(const LatticeModelConfig& cfg, const CoeffTable& lam1,
                                                  const CoeffTable& lam2, const DirichletCharacter& chi,
                                                  const KernelG& G, const WorkerPool& pool) {
  if (gcd(chi.modulus, cfg.q) != 1) throw DomainError("character modulus must be coprime to q");
  const PrimitiveReduction red = primitive_reduction(chi, lam2);
  CompensatedComplexSum total;
  for (const auto& term : red.terms) {
    LatticeModelConfig c = cfg;
    c.multiplier = cfg.multiplier * term.multiplier();
    c.b = mulmod(floor_mod(cfg.b, cfg.q), term.multiplier() % cfg.q, cfg.q);
    if (static_cast<double>(c.multiplier) > cfg.C * static_cast<double>(cfg.q)) continue;
    const auto r = weyl_lattice_model(c, lam1, lam2, &red.primitive, G, pool);
    total.add(term.coefficient * r.value);
  }
  return total.value();
}

DiagonalReport diagonal_term(i64 q, i64 b, const CoeffTable& lam1, const CoeffTable& lam2,
                             const KernelG& G, double C, int sign) {
  DiagonalReport r;
  const ReducedBasis basis = gauss_reduce(lambda_lattice(q, b, sign));
  r.x = basis.x;
  r.s = basis.s();
  const i64 X1 = std::abs(basis.x.x), X2 = std::abs(basis.x.y);
  if (X1 == 0 || X2 == 0) throw DomainError("diagonal_term needs x1 x2 != 0");
  const double cq = C * static_cast<double>(q);
  const i64 mmax = static_cast<i64>(std::floor(cq / static_cast<double>(std::max(X1, X2))));
  if (lam1.N < X1 * mmax || lam2.N < X2 * mmax)
    throw TruncationError("diagonal_term needs tables of length " + std::to_string(std::max(X1, X2) * mmax));
  KernelG g = G;
  g.floor = 1.0 / cq;
  const double qd = static_cast<double>(q);
  CompensatedComplexSum acc;
  for (i64 m = 1; m <= mmax; ++m) {
    const double l = lam1.lam[X1 * m] * lam2.lam[X2 * m];
    if (l == 0.0) continue;
    acc.add(l * g(static_cast<double>(X1 * m) / qd, static_cast<double>(X2 * m) / qd));
  }
  r.terms = mmax;
  r.value = acc.value() / qd;
  return r;
}

}  // namespace horolab
