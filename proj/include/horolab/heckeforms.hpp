#pragma once

// Hecke eigenvalue tables and automorphic test functions on
// X = SL_2(Z)\H.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "horolab/arith.hpp"
#include "horolab/parallel.hpp"

namespace horolab {

/// A coefficient beyond the end of a table was needed.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FormKind { holomorphic_level1, cm_theta, loaded_maass, eisenstein_divisor, synthetic };

std::string to_string(FormKind kind);

/// Normalized eigenvalues lambda(1..N); lam[0] is unused and zero.
struct CoeffTable {
  i64 N = 0;
  std::vector<double> lam;
  FormKind kind = FormKind::synthetic;
  double weight_or_t = 0.0;  // weight k, or spectral parameter t
  i64 conductor = 1;

  double operator()(i64 n) const {
    if (n < 1 || n > N) throw TruncationError("coefficient " + std::to_string(n) + " outside table of length " + std::to_string(N));
    return lam[static_cast<std::size_t>(n)];
  }
  /// Kinds for which |lambda(n)| <= d(n) is a theorem.
  bool satisfies_ramanujan() const {
    return kind == FormKind::holomorphic_level1 || kind == FormKind::cm_theta ||
           kind == FormKind::eisenstein_divisor;
  }
};

/// Exact tau(0..N) (tau(0) = 0) from q prod (1 - q^n)^24, computed as the
/// eighth power of the cube series by multimodular NTT squarings.
/// Supports N up to 2^21.
std::vector<i128> ramanujan_tau(i64 N, const WorkerPool& pool = serial_pool());

CoeffTable tau_table(i64 N, const WorkerPool& pool = serial_pool());

/// Real character values used in the Hecke recursion at p^k.
using PrimeCharacter = std::function<double(i64)>;

/// Extend lambda(p), p <= N, to a full table by
/// lambda(p^{k+1}) = lambda(p) lambda(p^k) - chi(p) lambda(p^{k-1}) and
/// multiplicativity. chi defaults to the trivial character. Throws
/// std::invalid_argument when a prime value is missing.
CoeffTable hecke_extend(const std::unordered_map<i64, double>& prime_values, i64 N,
                        const PrimeCharacter& chi = {});

/// Weight-one theta series sum_C chi(C) r_C(n) / w attached to a class group
/// character of a negative fundamental discriminant. The class group must be
/// cyclic; char_index k selects chi(g^j) = e(jk/h) for a generator g.
CoeffTable cm_theta_table(i64 D, i64 char_index, i64 N);

/// lambda(n) = d(n), the coefficients of the weight-zero Eisenstein series at
/// the centre.
CoeffTable divisor_table(i64 N);

/// Number of divisors for n <= N (index 0 unused).
std::vector<std::uint32_t> divisor_counts(i64 N);

struct TableAudit {
  bool lambda_one = false;
  i64 multiplicative_failures = 0;
  i64 ramanujan_failures = 0;
  i64 pairs_checked = 0;
  bool ok() const { return lambda_one && multiplicative_failures == 0 && ramanujan_failures == 0; }
};

/// lambda(1) = 1, multiplicativity on random coprime pairs, and
/// |lambda(n)| <= d(n) for every n when the kind satisfies Ramanujan.
TableAudit audit_table(const CoeffTable& table, std::uint64_t seed, int pairs = 200);

struct HalfPlanePoint {
  double x = 0.0;
  double y = 1.0;
};

struct Mat2 {
  i64 a = 1, b = 0, c = 0, d = 1;
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2 operator*(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

/// Moebius action of an integer matrix of determinant one.
HalfPlanePoint apply(const Mat2& g, HalfPlanePoint z);

struct FdReduction {
  HalfPlanePoint point;
  Mat2 gamma;  // gamma * z = point
};

/// Move z into the standard fundamental domain |x| <= 1/2, |z| >= 1.
FdReduction fd_reduce(HalfPlanePoint z);

/// phi(z) = y^12 |Delta(z)|^2 with absolute error at most tol.
double eval_delta_density(HalfPlanePoint z, double tol = 1e-12);

/// Integral of y^12 |Delta|^2 against the probability measure (3/pi) dx dy / y^2.
double delta_density_mean();

/// Smooth bump exp(1 - 1/(1 - u^2)) rescaled to [y0, y1]; peak value 1.
struct Bump {
  double y0 = 1.0;
  double y1 = 2.0;
  double operator()(double y) const;
};

/// E(z | psi) = sum over Gamma_inf \ Gamma of psi(Im gamma z).
double incomplete_eisenstein(HalfPlanePoint z, const Bump& psi);

/// (3/pi) int_0^inf psi(y) y^{-2} dy.
double incomplete_eisenstein_mean(const Bump& psi);

struct MaassData {
  double t = 0.0;
  int eps = 1;
  CoeffTable table;
};

/// Parse a coefficient file: `t <value> eps <+-1>` then `n lambda(n)` lines
/// with n = 1, 2, 3, ... Throws std::runtime_error on malformed input.
MaassData load_maass_file(const std::string& path);

/// sqrt(y) sum_n lambda(n) c K*_t(n y) (e(nx) + eps e(-nx)) at the
/// fd-reduced image of z. For eps = -1 the real form 2 sin(2 pi n x) is used.
/// Throws TruncationError if the table ends before the tail is negligible.
double maass_eval(const CoeffTable& table, double t, int eps, HalfPlanePoint z, double c = 1.0);

/// A bounded Gamma-invariant function on X together with its mean.
class TestFunction {
 public:
  enum class Kind { constant, delta, eisenstein, maass };

  static TestFunction constant(double value = 1.0);
  static TestFunction delta_density(double tol = 1e-12);
  static TestFunction eisenstein(Bump psi);
  static TestFunction maass(std::shared_ptr<const MaassData> data, double c = 1.0);

  /// Same function minus its mean, so that the mean becomes zero.
  TestFunction centered() const;

  Kind kind() const { return kind_; }
  double mean() const { return mean_ - shift_; }
  double operator()(HalfPlanePoint z) const;
  std::string name() const;

 private:
  Kind kind_ = Kind::constant;
  double value_ = 1.0;
  double tol_ = 1e-12;
  Bump psi_{};
  std::shared_ptr<const MaassData> maass_;
  double mean_ = 1.0;
  double shift_ = 0.0;
};

}  // namespace horolab
