#pragma once

// Special functions: the normalized K-Bessel function of imaginary order and
// composite Gauss-Legendre quadrature.

#include <cstddef>
#include <functional>

namespace horolab {

/// K*_{it}(x) = cosh(pi t)^{1/2} K_{it}(2 pi x), by adaptive Gauss-Kronrod
/// quadrature of cosh(pi t)^{1/2} int_0^inf exp(-2 pi x cosh u) cos(t u) du.
/// Throws DomainError for x <= 0.
double k_bessel_star(double t, double x, double rel_tol = 1e-10);

/// Composite Gauss-Legendre rule with `panels` equal panels on [a, b] and
/// `order` nodes per panel (order in {8, 16, 20, 30}).
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels, unsigned order = 20);

}  // namespace horolab
