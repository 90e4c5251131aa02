#include "mtf/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtf {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// Smallest U with U^p exp(-rate U) <= tol, for p >= 0. Fixed-point
// iteration on U = (log(1/tol) + p log U) / rate.
double exp_poly_horizon(double p, double rate, double tol) {
  const double logt = std::log(1.0 / tol);
  double u = (logt + std::max(p, 1.0)) / rate + 1.0;
  for (int i = 0; i < 12; ++i)
    u = (logt + p * std::log(std::max(u, 2.0))) / rate;
  return 1.05 * u + 1.0;
}

template <class F>
double integrate_checked(F&& f, double a, double b, const QuadratureSpec& spec,
                         double tol_scale, const char* what) {
  double err = 0.0;
  const double val = GK::integrate(std::forward<F>(f), a, b,
                                   static_cast<unsigned>(spec.max_depth),
                                   spec.rel_tol * tol_scale, &err);
  const double allowed =
      std::max(spec.abs_tol, 10.0 * spec.rel_tol * std::abs(val));
  if (err > allowed) {
    throw ToleranceError(std::string(what) +
                             ": quadrature error estimate " +
                             std::to_string(err) + " exceeds tolerance",
                         err);
  }
  return val;
}

double binomial(int n, int r) {
  double v = 1.0;
  for (int j = 0; j < r; ++j) v = v * (n - j) / (j + 1);
  return v;
}

} // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
  if (max_depth < 7 || max_depth > 30)
    throw std::invalid_argument(
        "QuadratureSpec: max_depth must allow at least 100 subdivisions "
        "(7 <= max_depth <= 30)");
}

double inner_integral(double gamma_index, long n, double c,
                      const QuadratureSpec& spec) {
  spec.validate();
  if (!(gamma_index > 0.0 && gamma_index < 1.0))
    throw std::invalid_argument("inner_integral: gamma_index in (0,1) required");
  if (n < 1) throw std::invalid_argument("inner_integral: n >= 1 required");
  if (!(c > 0.0) || !(c < static_cast<double>(n)))
    throw std::domain_error("inner_integral: need 0 < c < n, got c = " +
                            std::to_string(c) + ", n = " + std::to_string(n));

  const double inv_g = 1.0 / gamma_index;
  const double beta = c / static_cast<double>(n);  // inner decay rate
  const double alpha = 1.0 - beta;                 // outer decay rate
  const double q = 2.0 - inv_g;                    // x = y e^v exponent

  // The full integrand is bounded by exp(-y)/beta, so the outer horizon
  // needs only the unit rate.
  const double y_max =
      exp_poly_horizon(0.0, 1.0, 0.01 * spec.abs_tol * beta);

  // Inner x-horizon: the tail of x^(1-1/g) e^(-beta x) past X contributes
  // at most y^(1/g-1) e^(-beta X)/beta to the outer integrand.
  const double outer_poly = std::pow(std::max(y_max, 1.0), inv_g - 1.0);
  const double x_max = exp_poly_horizon(
      0.0, beta, 0.01 * spec.abs_tol / std::max(outer_poly, 1.0) * beta);

  auto outer = [&](double y) {
    const double v_max = std::log(std::max(x_max / y, 2.0));
    auto inner = [&](double v) {
      // x^(1-1/g) dx = y^(2-1/g) e^(q v) dv along x = y e^v
      return std::exp(q * v - beta * y * std::exp(v));
    };
    const double g_scaled =
        integrate_checked(inner, 0.0, v_max, spec, 0.1, "inner_integral");
    double f = y * std::exp(-alpha * y) * g_scaled;
    // analytic tail estimate for the truncated x-range
    const double log_tail = (inv_g - 1.0) * std::log(y) - alpha * y +
                            (1.0 - inv_g) * std::log(x_max) - beta * x_max -
                            std::log(beta);
    f += std::exp(log_tail);
    return f;
  };

  double result =
      integrate_checked(outer, 0.0, y_max, spec, 1.0, "inner_integral");
  result += outer(y_max); // first-order outer tail, rate ~ 1
  return result;
}

double laplace_Sn(double gamma_index, long n, double s,
                  const QuadratureSpec& spec) {
  spec.validate();
  if (!(gamma_index > 0.0 && gamma_index < 1.0))
    throw std::invalid_argument("laplace_Sn: gamma_index in (0,1) required");
  if (n < 1) throw std::invalid_argument("laplace_Sn: n >= 1 required");
  if (!(s >= 0.0)) throw std::domain_error("laplace_Sn: s must be >= 0");

  const double g = gamma_index;
  const double inv_g = 1.0 / g;
  const double nd = static_cast<double>(n);
  const double es = std::exp(-s);

  // After (x, y) = ((t+r)^g, r^g) and x = y e^v the transform reads
  //   (1/g) int_0^inf dy int_0^inf dv e^((1-1/g) v) e^(-x/n)
  //          [(1-g) + (g/n) x] H^(n-1),
  //   H = e^(-s) e^(-y/n) + (1 - e^(-s)) e^(-x/n).
  // H <= e^(-y/n) gives outer decay at unit rate; the inner x-decay is
  // only the weight factor's rate 1/n.
  const double y_max = exp_poly_horizon(1.0, 1.0, 0.01 * spec.abs_tol * g / nd);
  const double x_max =
      exp_poly_horizon(1.0, 1.0 / nd, 0.01 * spec.abs_tol * g / nd);

  auto outer = [&](double y) {
    const double eyn = std::exp(-y / nd);
    const double v_max = std::log(std::max(x_max / y, 2.0));
    auto inner = [&](double v) {
      const double x = y * std::exp(v);
      const double exn = std::exp(-x / nd);
      const double h = es * eyn + (1.0 - es) * exn;
      const double weight = exn * ((1.0 - g) + g * x / nd);
      return std::exp((1.0 - inv_g) * v) * weight *
             std::pow(h, static_cast<double>(n - 1));
    };
    double val = integrate_checked(inner, 0.0, v_max, spec, 0.1, "laplace_Sn");
    // tail of the inner integral, bounded with H <= e^(-y/n)
    const double tail =
        std::exp(-x_max / nd) * ((1.0 - g) * nd + g * (x_max + nd)) *
        std::pow(eyn, static_cast<double>(n - 1)) *
        std::pow(x_max / y, 1.0 - inv_g);
    return val + tail;
  };

  double result = integrate_checked(outer, 0.0, y_max, spec, 1.0, "laplace_Sn");
  result += outer(y_max);
  return result / g;
}

double Mkn_quadrature(double gamma_index, long n, int k,
                      const QuadratureSpec& spec) {
  if (k < 1) throw std::invalid_argument("Mkn_quadrature: k >= 1 required");
  if (n <= k + 1)
    throw std::domain_error(
        "Mkn_quadrature: need n > k + 1 so that every c = 2..k+1 stays "
        "below n");

  // I(gamma, n, c) for c = 2 + r, each used once.
  std::vector<double> inner(k);
  for (int r = 0; r < k; ++r)
    inner[r] = inner_integral(gamma_index, n, 2.0 + r, spec);

  // descending magnitude with compensation: binomial(k-1, r) peaks in the
  // middle, so sort by |term| before adding
  std::vector<double> terms(k);
  for (int r = 0; r < k; ++r)
    terms[r] = (r % 2 == 0 ? 1.0 : -1.0) * binomial(k - 1, r) * inner[r];
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double y = t - comp;
    const double u = sum + y;
    comp = (u - sum) - y;
    sum = u;
  }

  double tuple_count = static_cast<double>(n);
  for (int j = 1; j <= k; ++j) tuple_count *= static_cast<double>(n - j);
  return tuple_count * k * sum / (static_cast<double>(n) * static_cast<double>(n));
}

} // namespace mtf
