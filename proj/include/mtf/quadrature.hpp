#ifndef MTF_QUADRATURE_HPP
#define MTF_QUADRATURE_HPP

#include "mtf/errors.hpp"

namespace mtf {

/// Controls for the adaptive Gauss-Kronrod evaluations.
///
/// Truncation horizon policy: every integral here is of the form
/// (polynomial) * exp(-rate * u) after the change of variables, so the
/// infinite upper limits are cut at the smallest U with
/// U^p exp(-rate U) below a fraction of abs_tol, and a first-order
/// analytic tail estimate is added back.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  /// Adaptive bisection depth per 1-D integral (2^max_depth panels).
  /// 20 keeps the error estimator honest near the y -> 0 endpoint, where
  /// the integrands pick up a y log y shape.
  int max_depth = 20;

  /// Throws std::invalid_argument when tolerances are not positive or
  /// the depth allows fewer than 100 subdivisions.
  void validate() const;
};

/// Laplace transform of the stationary search cost S_n in the stable
/// case, by direct iterated quadrature of the double-integral
/// representation (weights with transform exp(-x^gamma / n)). s >= 0.
double laplace_Sn(double gamma_index, long n, double s,
                  const QuadratureSpec& spec = {});

/// The double integral
///   I(gamma, n, c) = int_0^inf y^(1/gamma-1) e^{-y(1-c/n)}
///                      int_y^inf x^(1-1/gamma) e^{-xc/n} dx dy
/// for 0 < c < n, evaluated after the substitution x = y e^v. Satisfies
/// I = gamma * 2F1(2, 1; 1/gamma + 1; 1 - c/n), which the tests check
/// against the series implementation.
double inner_integral(double gamma_index, long n, double c,
                      const QuadratureSpec& spec = {});

/// M_{k,n}(0) assembled from inner_integral:
///   (1/n^2) * n(n-1)...(n-k) * k *
///     sum_{r=0..k-1} (-1)^r C(k-1, r) I(gamma, n, 2 + r)
/// Requires n > k + 1 so every c = 2 + r stays below n.
double Mkn_quadrature(double gamma_index, long n, int k,
                      const QuadratureSpec& spec = {});

} // namespace mtf

#endif
