#ifndef MTF_WEIGHTS_HPP
#define MTF_WEIGHTS_HPP

#include "mtf/rng.hpp"

#include <vector>

namespace mtf {

enum class WeightKind { Stable, Gamma, Deterministic };

/// Law of the i.i.d. positive weights behind the request probabilities.
///
/// Stable: one-sided gamma_index-stable increments with equal spacing 1/n,
/// so each weight has Laplace transform exp(-s^gamma / n). Gamma: unit-rate
/// gamma weights with the given shape (normalizing gives a Dirichlet
/// vector). Deterministic: a fixed positive vector.
class WeightModel {
public:
  static WeightModel stable(double gamma_index, int n);
  static WeightModel gamma_weights(double shape, int n);
  static WeightModel deterministic(std::vector<double> values);

  WeightKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  double gamma_index() const noexcept { return gamma_index_; }
  double shape() const noexcept { return shape_; }
  const std::vector<double>& values() const noexcept { return values_; }

private:
  WeightModel() = default;

  WeightKind kind_ = WeightKind::Deterministic;
  int n_ = 0;
  double gamma_index_ = 0.0;
  double shape_ = 0.0;
  std::vector<double> values_;
};

/// Normalized request probabilities. Entries are nonnegative, sum to 1
/// within 1e-12; total_weight keeps the pre-normalization sum W_n as a
/// diagnostic.
struct PopularityVector {
  std::vector<double> p;
  double total_weight = 0.0;

  int n() const noexcept { return static_cast<int>(p.size()); }
};

/// Laplace transform E[exp(-s w_i)] of weight i under the model, s >= 0.
double laplace_weight(const WeightModel& model, int i, double s);

/// One draw X > 0 with E[exp(-s X)] = exp(-scale * s^gamma_index),
/// 0 < gamma_index < 1, by Kanter's method.
double sample_stable(double gamma_index, double scale, RngStream& rng);

/// One draw of weight i under the model.
double sample_weight(const WeightModel& model, int i, RngStream& rng);

/// Draw n independent weights and normalize. Non-finite weight sums are
/// resampled and counted; gives up after 100 consecutive failures.
PopularityVector sample_popularities(const WeightModel& model, RngStream& rng);

/// How many weight vectors were re-drawn because the sum overflowed
/// (process-wide diagnostic counter).
long popularity_resample_count() noexcept;

} // namespace mtf

#endif
