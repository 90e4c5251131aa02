#include "mtf/special_fn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mtf {

namespace {

constexpr double kSeriesRelTol = 1e-12;
constexpr long kMaxTerms = 1000000;

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// log |Gamma(x)| and the sign of Gamma(x). Negative non-integer arguments
// go through the reflection formula; nonpositive integers report a pole.
double log_abs_gamma(double x, int& sign, bool& pole) {
  pole = false;
  sign = 1;
  if (x > 0.0) return std::lgamma(x);
  if (is_nonpositive_integer(x)) {
    pole = true;
    return std::numeric_limits<double>::infinity();
  }
  // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
  const double s = std::sin(M_PI * x);
  sign = s > 0.0 ? 1 : -1;
  return std::log(M_PI) - std::log(std::abs(s)) - std::lgamma(1.0 - x);
}

} // namespace

double pochhammer(double a, int k) {
  if (k < 0) throw std::invalid_argument("pochhammer: k must be >= 0");
  if (k == 0) return 1.0;
  if (is_nonpositive_integer(a) && a + k > 0.0) {
    throw std::domain_error("pochhammer: pole crossing at a = " +
                            std::to_string(a) + ", k = " + std::to_string(k));
  }
  if (k <= 64 || a <= 0.0) {
    double prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= a + j;
    return prod;
  }
  return std::exp(std::lgamma(a + k) - std::lgamma(a));
}

namespace detail {

double hyp2f1_series(double a, double b, double c, double z) {
  if (z == 0.0) return 1.0;
  double sum = 1.0;
  double term = 1.0;
  double comp = 0.0;
  int small_run = 0;
  for (long l = 0; l < kMaxTerms; ++l) {
    const double ld = static_cast<double>(l);
    term *= (a + ld) * (b + ld) / ((c + ld) * (ld + 1.0)) * z;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;

    // Geometric tail bound: the term ratio tends to z from one side, so
    // max(current ratio, z) dominates every later ratio.
    const double next_ratio = std::abs((a + ld + 1.0) * (b + ld + 1.0) /
                                       ((c + ld + 1.0) * (ld + 2.0)) * z);
    const double rho = std::max(next_ratio, std::abs(z));
    if (rho < 1.0) {
      const double tail = std::abs(term) * rho / (1.0 - rho);
      const double target = kSeriesRelTol * std::abs(sum);
      if (std::abs(term) <= target && tail <= target) {
        if (++small_run >= 3) return sum;
        continue;
      }
    }
    small_run = 0;
  }
  throw NonConvergenceError(
      "hyp2f1: series did not converge within 1e6 terms (a=" +
          std::to_string(a) + ", b=" + std::to_string(b) +
          ", c=" + std::to_string(c) + ", z=" + std::to_string(z) + ")",
      std::abs(term / sum));
}

double hyp2f1_euler(double a, double b, double c, double z) {
  if (z < 0.0 || z >= 1.0)
    throw std::domain_error("hyp2f1_euler: z must lie in [0, 1)");
  if (c <= 0.0) throw std::domain_error("hyp2f1_euler: c must be positive");
  return std::pow(1.0 - z, c - a - b) * hyp2f1_series(c - a, c - b, c, z);
}

} // namespace detail

double hyp2f1(double a, double b, double c, double z) {
  if (z < 0.0 || z >= 1.0)
    throw std::domain_error("hyp2f1: z must lie in [0, 1), got " +
                            std::to_string(z));
  if (c <= 0.0)
    throw std::domain_error("hyp2f1: c must be positive, got " +
                            std::to_string(c));
  return detail::hyp2f1_series(a, b, c, z);
}

HypResult hyp2f1_at_1(double a, double b, double c) {
  if (c <= 0.0)
    throw std::domain_error("hyp2f1_at_1: c must be positive, got " +
                            std::to_string(c));
  const double d = c - a - b;
  if (d <= 0.0) return HypResult::diverged();

  // Gauss: Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)). Numerator
  // arguments are positive here, so the only poles can sit in the
  // denominator, where they produce a zero, not an infinity.
  int sign_ca = 1, sign_cb = 1;
  bool pole_ca = false, pole_cb = false;
  const double lg_ca = log_abs_gamma(c - a, sign_ca, pole_ca);
  const double lg_cb = log_abs_gamma(c - b, sign_cb, pole_cb);
  if (pole_ca || pole_cb) return HypResult::finite(0.0);

  const double log_mag = std::lgamma(c) + std::lgamma(d) - lg_ca - lg_cb;
  return HypResult::finite(sign_ca * sign_cb * std::exp(log_mag));
}

} // namespace mtf
