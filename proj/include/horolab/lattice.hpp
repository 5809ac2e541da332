#pragma once

// Rank-two integer lattices: the congruence lattice {n1 + b n2 = 0 mod q},
// Lagrange-Gauss reduction and the minimum s(q;b).

#include <array>
#include <cmath>
#include <string>

#include "horolab/arith.hpp"

namespace horolab {

struct Vec2 {
  i64 x = 0;
  i64 y = 0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(i64 k, Vec2 a) { return {k * a.x, k * a.y}; }
};

inline i128 dot(Vec2 a, Vec2 b) { return static_cast<i128>(a.x) * b.x + static_cast<i128>(a.y) * b.y; }
inline i128 norm2(Vec2 a) { return dot(a, a); }
inline i128 det(Vec2 a, Vec2 b) { return static_cast<i128>(a.x) * b.y - static_cast<i128>(a.y) * b.x; }

/// Integer basis of a finite-index sublattice of Z^2.
class Lattice2D {
 public:
  Lattice2D(Vec2 v1, Vec2 v2);

  Vec2 v1() const { return v1_; }
  Vec2 v2() const { return v2_; }
  i64 covolume() const { return covolume_; }
  bool contains(Vec2 n) const;

 private:
  Vec2 v1_;
  Vec2 v2_;
  i64 covolume_;
};

/// Lagrange-Gauss reduced basis: |x| <= |y| and |x +- y| >= |y|.
struct ReducedBasis {
  Vec2 x;
  Vec2 y;
  i64 s_squared = 0;

  double s() const { return std::sqrt(static_cast<double>(s_squared)); }
};

/// Basis {(-sign*b, 1), (q, 0)} of {(n1,n2) : n1 + sign*b*n2 = 0 mod q}.
Lattice2D lambda_lattice(i64 q, i64 b, int sign = +1);

ReducedBasis gauss_reduce(const Lattice2D& lattice);

/// Squared minimum s(q;b)^2, exact.
i64 s_min_squared(i64 q, i64 b);
double s_min(i64 q, i64 b);

/// Hermite bound in rank two for covolume q: s^2 <= (2/sqrt 3) q, decided
/// exactly as 3 s^4 <= 4 q^2.
bool minkowski_bound_holds(i64 q, i64 s_squared);

/// Outcome of checking how s(q;.) moves under b -> bd, b -> b/d, b -> 1/b.
struct MinLemmaReport {
  i64 q = 0, b = 0, d = 0;
  i64 s_b = 0, s_bd = 0, s_bdbar = 0, s_bbar = 0;  // squared minima
  bool skipped = false;
  // lower/upper bound for bd, lower/upper bound for b*dbar, s(b) = s(bbar)
  std::array<bool, 5> checks{};

  bool all_pass() const;
  std::string describe() const;
};

MinLemmaReport check_min_lemma(i64 q, i64 b, i64 d);

}  // namespace horolab
