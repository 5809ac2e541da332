#include "horolab/lattice.hpp"

#include <sstream>
#include <utility>

namespace horolab {

Lattice2D::Lattice2D(Vec2 v1, Vec2 v2) : v1_(v1), v2_(v2) {
  const i128 d = det(v1, v2);
  if (d == 0) throw DomainError("degenerate lattice basis");
  covolume_ = static_cast<i64>(d < 0 ? -d : d);
}

bool Lattice2D::contains(Vec2 n) const {
  const i128 d = det(v1_, v2_);
  return det(n, v2_) % d == 0 && det(v1_, n) % d == 0;
}

Lattice2D lambda_lattice(i64 q, i64 b, int sign) {
  if (q < 1) throw DomainError("lattice modulus must be positive");
  if (sign != 1 && sign != -1) throw DomainError("lattice sign must be +1 or -1");
  const i64 br = floor_mod(b, q);
  if (gcd(br, q) != 1) throw DomainError("lattice shift must be coprime to q");
  return Lattice2D({-sign * br, 1}, {q, 0});
}

namespace {

// nearest integer to num/den for den > 0
i64 round_div(i128 num, i128 den) {
  i128 twice = 2 * num + den;
  i128 d2 = 2 * den;
  i128 fl = twice / d2;
  if ((twice % d2 != 0) && ((twice < 0) != (d2 < 0))) --fl;
  return static_cast<i64>(fl);
}

}  // namespace

ReducedBasis gauss_reduce(const Lattice2D& lattice) {
  Vec2 a = lattice.v1();
  Vec2 b = lattice.v2();
  if (norm2(a) > norm2(b)) std::swap(a, b);
  for (;;) {
    const i64 mu = round_div(dot(a, b), norm2(a));
    b = b - mu * a;
    if (norm2(b) >= norm2(a)) break;
    std::swap(a, b);
  }
  return {a, b, static_cast<i64>(norm2(a))};
}

i64 s_min_squared(i64 q, i64 b) { return gauss_reduce(lambda_lattice(q, b, +1)).s_squared; }

double s_min(i64 q, i64 b) { return std::sqrt(static_cast<double>(s_min_squared(q, b))); }

bool minkowski_bound_holds(i64 q, i64 s_squared) {
  const i128 s2 = s_squared;
  return 3 * s2 * s2 <= 4 * static_cast<i128>(q) * q;
}

bool MinLemmaReport::all_pass() const {
  if (skipped) return true;
  for (bool c : checks)
    if (!c) return false;
  return true;
}

std::string MinLemmaReport::describe() const {
  std::ostringstream os;
  os << "q=" << q << " b=" << b << " d=" << d << " s^2(b)=" << s_b << " s^2(bd)=" << s_bd
     << " s^2(b/d)=" << s_bdbar << " s^2(1/b)=" << s_bbar;
  if (skipped) os << " (skipped)";
  return os.str();
}

MinLemmaReport check_min_lemma(i64 q, i64 b, i64 d) {
  if (d < 1) throw DomainError("check_min_lemma needs d >= 1");
  if (gcd(floor_mod(mulmod(d, b, q), q), q) != 1)
    throw DomainError("check_min_lemma needs gcd(db, q) = 1");
  MinLemmaReport r;
  r.q = q;
  r.b = floor_mod(b, q);
  r.d = d;
  if (q <= 3) {
    r.skipped = true;
    return r;
  }
  const i64 dbar = mod_inv(Residue(d, q)).value();
  const i64 bbar = mod_inv(Residue(b, q)).value();
  r.s_b = s_min_squared(q, b);
  r.s_bd = s_min_squared(q, mulmod(b, d, q));
  r.s_bdbar = s_min_squared(q, mulmod(b, dbar, q));
  r.s_bbar = s_min_squared(q, bbar);
  const i128 d2 = static_cast<i128>(d) * d;
  // d^-1 s(b) <= s(bd)  <=>  s(b)^2 <= d^2 s(bd)^2, etc.
  r.checks[0] = r.s_b <= d2 * r.s_bd;
  r.checks[1] = r.s_bd <= d2 * r.s_b;
  r.checks[2] = r.s_b <= d2 * r.s_bdbar;
  r.checks[3] = r.s_bdbar <= d2 * r.s_b;
  r.checks[4] = r.s_b == r.s_bbar;
  return r;
}

}  // namespace horolab
