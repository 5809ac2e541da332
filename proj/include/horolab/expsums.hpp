#pragma once

// Kloosterman sums and their averages, shifted convolution sums, and the
// lattice-sum model of the pair Weyl sum with its diagonal term.

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "horolab/arith.hpp"
#include "horolab/heckeforms.hpp"
#include "horolab/lattice.hpp"
#include "horolab/parallel.hpp"

namespace horolab {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kloosterman sums to one modulus, using tables of inverses and of e(k/q).
class KloostermanTable {
 public:
  explicit KloostermanTable(i64 q);

  i64 modulus() const { return q_; }
  std::complex<double> complex_sum(i64 a, i64 b) const;
  /// Real value; throws NumericalError if |Im| > 1e-9.
  double operator()(i64 a, i64 b) const;

 private:
  i64 q_;
  std::vector<i64> units_;
  std::vector<i64> inverses_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// S(a, b; q) = sum over x mod q, (x, q) = 1 of e((a x + b xbar)/q).
double kloosterman(i64 a, i64 b, i64 q);

struct KloostermanAverageConfig {
  i64 H = 1, S = 1, Q = 1;
  i64 d = 1;     // h restricted to d | h, (d, h/d) = 1
  i64 N = 1;     // q restricted to N | q
  int sign = 1;  // S(sign * h, s, q)
  std::function<std::complex<double>(i64)> a;       // weight a(h); default 1
  std::function<std::complex<double>(i64)> b;       // weight b(s); default 1
  std::function<double(i64, i64, i64)> u;           // u(h, s, q); default 1
  double theta = 7.0 / 64.0;
};

struct KloostermanAverageReport {
  std::complex<double> value;
  double envelope = 0.0;  // right side of the averaged bound with epsilon = 0
  double ratio = 0.0;     // |value| / envelope
  i64 terms = 0;
};

/// sum over N | q in [Q, 2Q], s in [S, 2S], h in [H, 2H] with d | h,
/// (d, h/d) = 1 of a(h) b(s) S(sign h, s, q) u(h, s, q).
KloostermanAverageReport kloosterman_average(const KloostermanAverageConfig& cfg,
                                             const WorkerPool& pool = serial_pool());

using Window = std::function<std::complex<double>(i64, i64)>;

/// sum over l1 m1 + sign l2 m2 = h, m_i in [M_i, 2 M_i] of
/// lambda1(m1) lambda2(m2) G(m1, m2).
std::complex<double> shifted_convolution(const CoeffTable& lam1, const CoeffTable& lam2, i64 l1, i64 l2,
                                         int sign, i64 h, const Window& G, i64 M1, i64 M2);

/// Weight functions G(x1, x2) = g1(x1) g2(x2) for the lattice model.
struct KernelG {
  enum class Kind { bessel, holomorphic, gaussian };
  Kind kind = Kind::holomorphic;
  double t1 = 0.0, t2 = 0.0;  // spectral parameters (bessel)
  double k1 = 12, k2 = 12;    // weights (holomorphic)
  double x0 = 0.0;
  double y0 = 1.0;
  double floor = 0.0;  // arguments below this are raised to it

  static KernelG bessel(double t1, double t2, double x0 = 0.0, double y0 = 1.0);
  static KernelG holomorphic(double k1, double k2, double x0 = 0.0, double y0 = 1.0);
  static KernelG gaussian(double x0 = 0.0, double y0 = 1.0);

  double first(double x1) const;
  std::complex<double> second(double x2) const;
  std::complex<double> operator()(double x1, double x2) const { return first(x1) * second(x2); }
};

/// Character given by its full value table mod d0.
struct DirichletCharacter {
  i64 modulus = 1;
  std::vector<std::complex<double>> values;

  std::complex<double> operator()(i64 n) const { return values[static_cast<std::size_t>(floor_mod(n, modulus))]; }

  static DirichletCharacter principal(i64 d0);
  /// chi(g^j) = e(j k / (p - 1)) for the smallest primitive root g mod an odd prime p.
  static DirichletCharacter prime(i64 p, i64 k);
  /// Product of characters to coprime moduli.
  static DirichletCharacter product(const DirichletCharacter& a, const DirichletCharacter& b);
  /// Lift to a multiple of the modulus.
  DirichletCharacter induced(i64 d0) const;
};

/// Smallest f | modulus such that chi factors through (Z/fZ)^*.
i64 conductor(const DirichletCharacter& chi);
/// The primitive character inducing chi.
DirichletCharacter primitive_character(const DirichletCharacter& chi);

/// One term of the reduction to a primitive character:
/// coefficient * sum over n1 +- b m n'' = 0 (q) of
/// lambda1(n1) lambda2(n'') chi*(n'') G(n1/q, m n''/q) with m = f g.
struct PrimitiveTerm {
  i64 f = 1, g = 1;
  std::complex<double> coefficient;
  i64 multiplier() const { return f * g; }
};

struct PrimitiveReduction {
  DirichletCharacter primitive;
  std::vector<PrimitiveTerm> terms;
};

/// Valid when lambda2 obeys the Hecke relations with trivial central
/// character.
PrimitiveReduction primitive_reduction(const DirichletCharacter& chi, const CoeffTable& lam2);

struct LatticeModelConfig {
  i64 q = 0;
  i64 b = 0;
  int sign = -1;      // lattice n1 + sign b n2 = 0 mod q
  double C = 10.0;    // n_i <= C q
  i64 multiplier = 1;  // second coordinate enters G as multiplier * n2
};

struct LatticeModelReport {
  std::complex<double> value;
  std::complex<double> shell;  // contribution of points with max(n1, m n2) > C q / 2
  ReducedBasis basis;
  i64 points = 0;
};

/// (1/q) sum over (n1, n2) in Lambda_{q, sign b}, 0 < n1 <= Cq,
/// 0 < m n2 <= Cq of lambda1(n1) lambda2(n2) chi(n2) G(n1/q, m n2/q),
/// visiting only lattice points via the reduced basis.
LatticeModelReport weyl_lattice_model(const LatticeModelConfig& cfg, const CoeffTable& lam1,
                                      const CoeffTable& lam2, const DirichletCharacter* chi,
                                      const KernelG& G, const WorkerPool& pool = serial_pool());

/// Same sum evaluated through primitive_reduction (exact rearrangement).
std::complex<double> weyl_lattice_model_primitive(const LatticeModelConfig& cfg, const CoeffTable& lam1,
                                                  const CoeffTable& lam2, const DirichletCharacter& chi,
                                                  const KernelG& G, const WorkerPool& pool = serial_pool());

struct DiagonalReport {
  std::complex<double> value;
  Vec2 x;  // reduced first vector
  double s = 0.0;
  i64 terms = 0;
};

/// (1/q) sum_m lambda1(|x1| m) lambda2(|x2| m) G(|x1| m/q, |x2| m/q) over
/// max(|x1|, |x2|) m <= Cq, x the reduced first vector of Lambda_{q, sign b}.
DiagonalReport diagonal_term(i64 q, i64 b, const CoeffTable& lam1, const CoeffTable& lam2,
                             const KernelG& G, double C = 10.0, int sign = -1);

}  // namespace horolab
