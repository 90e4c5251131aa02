#include "mtf/weights.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mtf {

double RngStream::gamma_shape(double shape) {
  if (!(shape > 0.0))
    throw std::invalid_argument("gamma_shape: shape must be positive");
  if (shape < 1.0) {
    // Boost: Gamma(shape) = Gamma(shape + 1) * U^(1/shape)
    const double g = gamma_shape(shape + 1.0);
    return g * std::pow(uniform01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

WeightModel WeightModel::stable(double gamma_index, int n) {
  if (!(gamma_index > 0.0 && gamma_index < 1.0))
    throw std::invalid_argument("WeightModel::stable: gamma_index in (0,1) required, got " +
                                std::to_string(gamma_index));
  if (n < 1) throw std::invalid_argument("WeightModel::stable: n >= 1 required");
  WeightModel m;
  m.kind_ = WeightKind::Stable;
  m.n_ = n;
  m.gamma_index_ = gamma_index;
  return m;
}

WeightModel WeightModel::gamma_weights(double shape, int n) {
  if (!(shape > 0.0))
    throw std::invalid_argument("WeightModel::gamma_weights: shape must be positive");
  if (n < 1) throw std::invalid_argument("WeightModel::gamma_weights: n >= 1 required");
  WeightModel m;
  m.kind_ = WeightKind::Gamma;
  m.n_ = n;
  m.shape_ = shape;
  return m;
}

WeightModel WeightModel::deterministic(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("WeightModel::deterministic: empty value vector");
  for (double v : values)
    if (!(v > 0.0))
      throw std::invalid_argument("WeightModel::deterministic: all values must be > 0");
  WeightModel m;
  m.kind_ = WeightKind::Deterministic;
  m.n_ = static_cast<int>(values.size());
  m.values_ = std::move(values);
  return m;
}

double laplace_weight(const WeightModel& model, int i, double s) {
  if (s < 0.0) throw std::domain_error("laplace_weight: s must be >= 0");
  if (i < 0 || i >= model.n())
    throw std::out_of_range("laplace_weight: item index out of range");
  switch (model.kind()) {
    case WeightKind::Stable:
      // equal spacing 1/n: phi(s) = exp(-s^gamma / n)
      return std::exp(-std::pow(s, model.gamma_index()) / model.n());
    case WeightKind::Gamma:
      return std::pow(1.0 + s, -model.shape());
    case WeightKind::Deterministic:
      return std::exp(-s * model.values()[i]);
  }
  return 0.0; // unreachable
}

double sample_stable(double gamma_index, double scale, RngStream& rng) {
  if (!(gamma_index > 0.0 && gamma_index < 1.0))
    throw std::invalid_argument("sample_stable: gamma_index in (0,1) required");
  if (!(scale > 0.0))
    throw std::invalid_argument("sample_stable: scale must be positive");
  const double g = gamma_index;

  // Kanter: X = scale^(1/g) * (A(U)/E)^((1-g)/g) with
  // A(u) = [sin(pi g u)^g sin(pi (1-g) u)^(1-g) / sin(pi u)]^(1/(1-g)).
  // Worked in logs; U in the open interval keeps every sine positive.
  const double u = rng.uniform01();
  const double e = rng.exponential();
  const double log_a = (g * std::log(std::sin(M_PI * g * u)) +
                        (1.0 - g) * std::log(std::sin(M_PI * (1.0 - g) * u)) -
                        std::log(std::sin(M_PI * u))) /
                       (1.0 - g);
  const double log_x =
      std::log(scale) / g + (1.0 - g) / g * (log_a - std::log(e));
  return std::exp(log_x);
}

double sample_weight(const WeightModel& model, int i, RngStream& rng) {
  switch (model.kind()) {
    case WeightKind::Stable:
      return sample_stable(model.gamma_index(), 1.0 / model.n(), rng);
    case WeightKind::Gamma:
      return rng.gamma_shape(model.shape());
    case WeightKind::Deterministic:
      return model.values()[i];
  }
  return 0.0; // unreachable
}

namespace {
std::atomic<long> g_resample_count{0};
}

long popularity_resample_count() noexcept { return g_resample_count.load(); }

PopularityVector sample_popularities(const WeightModel& model, RngStream& rng) {
  const int n = model.n();
  PopularityVector pop;
  pop.p.resize(n);

  for (int attempt = 0; attempt < 100; ++attempt) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      pop.p[i] = sample_weight(model, i, rng);
      total += pop.p[i];
    }
    if (!std::isfinite(total) || !(total > 0.0)) {
      g_resample_count.fetch_add(1);
      continue;
    }

    for (double& x : pop.p) x /= total;
    // second pass pins the sum to 1 even when n is large
    double s = 0.0;
    for (double x : pop.p) s += x;
    for (double& x : pop.p) x /= s;
    pop.total_weight = total;
    return pop;
  }
  throw std::runtime_error(
      "sample_popularities: 100 consecutive non-finite weight sums");
}

} // namespace mtf
