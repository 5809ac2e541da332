#include "horolab/special.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "horolab/arith.hpp"

namespace horolab {

namespace bq = boost::math::quadrature;

double k_bessel_star(double t, double x, double rel_tol) {
  if (!(x > 0.0)) throw DomainError("k_bessel_star needs x > 0");
  using ld = long double;
  const ld pi = std::numbers::pi_v<ld>;
  const ld X = 2 * pi * static_cast<ld>(x);
  const ld tt = static_cast<ld>(t);
  // beyond U the integrand is below exp(-70 - pi|t|/2) relative to its peak
  const ld U = std::acosh(1 + (70 + pi * std::fabs(tt) / 2) / X);
  auto integrand = [&](ld u) { return std::exp(X * (1 - std::cosh(u))) * std::cos(tt * u); };
  // split so every panel sees at most a couple of oscillations
  const int pieces = 1 + static_cast<int>(std::fabs(tt) * U / pi);
  ld total = 0;
  for (int k = 0; k < pieces; ++k) {
    const ld lo = U * k / pieces, hi = U * (k + 1) / pieces;
    total += bq::gauss_kronrod<ld, 61>::integrate(integrand, lo, hi, 15,
                                                  static_cast<ld>(rel_tol) * 1e-3L);
  }
  // exp(-X) was factored out of the integrand; cosh(pi t)^{1/2} exp(-X) is
  // formed in log space to stay finite for large t
  const ld a = pi * std::fabs(tt);
  const ld log_pref = 0.5L * (a + std::log1p(std::exp(-2 * a)) - std::log(2.0L)) - X;
  return static_cast<double>(std::exp(log_pref) * total);
}

namespace {

template <unsigned N>
double gl_panels(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    total += bq::gauss<double, N>::integrate(f, lo, lo + h);
  }
  return total;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels, unsigned order) {
  if (panels == 0) throw std::invalid_argument("gauss_legendre needs at least one panel");
  switch (order) {
    case 8: return gl_panels<8>(f, a, b, panels);
    case 16: return gl_panels<16>(f, a, b, panels);
    case 20: return gl_panels<20>(f, a, b, panels);
    case 30: return gl_panels<30>(f, a, b, panels);
    default: throw std::invalid_argument("unsupported Gauss-Legendre order");
  }
}

}  // namespace horolab
