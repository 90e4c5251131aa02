#ifndef MTF_SPECIAL_FN_HPP
#define MTF_SPECIAL_FN_HPP

#include "mtf/errors.hpp"

namespace mtf {

/// Value of a Gauss hypergeometric evaluation that may diverge at z = 1.
///
/// Exactly one of the two states holds: a finite value, or the divergent
/// marker. Divergence at z = 1 occurs precisely when c - a - b <= 0.
struct HypResult {
  double value = 0.0;
  bool divergent = false;

  static HypResult finite(double v) { return HypResult{v, false}; }
  static HypResult diverged() { return HypResult{0.0, true}; }
};

/// Ascending factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
///
/// Computed by iterated product for k <= 64, by a log-gamma difference
/// beyond that. Throws std::domain_error when a is a nonpositive integer
/// whose pole lies inside [a, a+k-1], and std::invalid_argument for k < 0.
double pochhammer(double a, int k);

/// Gauss hypergeometric 2F1(a, b; c; z) for c > 0 and z in [0, 1).
///
/// Direct power-series summation with term recurrence; stops once the
/// geometric tail bound drops below 1e-12 relative and three consecutive
/// terms are individually small. Throws std::domain_error for z outside
/// [0, 1) or c <= 0, NonConvergenceError if 10^6 terms do not suffice.
double hyp2f1(double a, double b, double c, double z);

/// Boundary value 2F1(a, b; c; 1).
///
/// Finite exactly when c - a - b > 0, in which case Gauss's formula
/// Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)) applies; otherwise the
/// divergent marker is returned. Requires c > 0.
HypResult hyp2f1_at_1(double a, double b, double c);

namespace detail {

/// Series route used by hyp2f1; exposed so tests can pit the two
/// evaluation paths against each other.
double hyp2f1_series(double a, double b, double c, double z);

/// Euler-transformed route: (1-z)^(c-a-b) * 2F1(c-a, c-b; c; z).
/// Same domain as hyp2f1; used as an independent evaluation path in tests.
double hyp2f1_euler(double a, double b, double c, double z);

} // namespace detail

} // namespace mtf

#endif
