#include "mtf/analytic.hpp"

#include "mtf/special_fn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtf {

namespace {

// a + b with 128-bit overflow detection
wide_uint checked_add(wide_uint a, wide_uint b, int row) {
  wide_uint r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("coefficient triangle overflow at row " +
                        std::to_string(row));
  return r;
}

wide_uint checked_mul(wide_uint a, wide_uint b, int row) {
  wide_uint r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("coefficient triangle overflow at row " +
                        std::to_string(row));
  return r;
}

double binomial(int n, int r) {
  double v = 1.0;
  for (int j = 0; j < r; ++j) v = v * (n - j) / (j + 1);
  return v;
}

} // namespace

CoefficientTriangle CoefficientTriangle::build(int k_max) {
  if (k_max < 1 || k_max > 64)
    throw std::invalid_argument("CoefficientTriangle: k_max must be in [1, 64]");
  CoefficientTriangle tri;
  tri.rows_.reserve(k_max);
  tri.rows_.push_back({wide_uint{1}});
  for (int k = 2; k <= k_max; ++k) {
    const auto& prev = tri.rows_.back();
    std::vector<wide_uint> row(k);
    row[0] = 1;
    row[k - 1] = 1;
    for (int l = 2; l <= k - 1; ++l) {
      const wide_uint scaled =
          checked_mul(prev[l - 1], static_cast<wide_uint>(l), k);
      row[l - 1] = checked_add(prev[l - 2], scaled, k);
    }
    tri.rows_.push_back(std::move(row));
  }
  return tri;
}

wide_uint CoefficientTriangle::at(int k, int l) const {
  if (k < 1 || k > k_max() || l < 1 || l > k)
    throw std::out_of_range("CoefficientTriangle::at: need 1 <= l <= k <= k_max");
  return rows_[k - 1][l - 1];
}

double CoefficientTriangle::at_double(int k, int l) const {
  return static_cast<double>(at(k, l));
}

const std::vector<wide_uint>& CoefficientTriangle::row(int k) const {
  if (k < 1 || k > k_max())
    throw std::out_of_range("CoefficientTriangle::row: k out of range");
  return rows_[k - 1];
}

MomentValue limit_Mk(double gamma_index, int k) {
  if (!(gamma_index > 0.0 && gamma_index < 1.0))
    throw std::invalid_argument("limit_Mk: gamma_index in (0,1) required");
  if (k < 1) throw std::invalid_argument("limit_Mk: k >= 1 required");

  // Finite exactly for gamma < 1/(k+1); at the boundary the Pochhammer
  // below has a zero factor, so it counts as divergent too.
  if (!(gamma_index < 1.0 / (k + 1)))
    return MomentValue::diverged(gamma_index, k);

  const double inv_gamma = 1.0 / gamma_index;
  double value;
  if (k <= 20) {
    double kfac = 1.0;
    for (int j = 2; j <= k; ++j) kfac *= j;
    value = kfac * kfac / pochhammer(inv_gamma - k - 1.0, k);
  } else {
    // log space keeps (k!)^2 and the Pochhammer from overflowing
    const double log_val = 2.0 * std::lgamma(k + 1.0) +
                           std::lgamma(inv_gamma - k - 1.0) -
                           std::lgamma(inv_gamma - 1.0);
    value = std::exp(log_val);
  }
  return MomentValue::finite(value, gamma_index, k);
}

double finite_n_Mk(double gamma_index, long n, int k) {
  if (!(gamma_index > 0.0 && gamma_index < 1.0))
    throw std::invalid_argument("finite_n_Mk: gamma_index in (0,1) required");
  if (k < 1) throw std::invalid_argument("finite_n_Mk: k >= 1 required");
  if (n < 1) throw std::invalid_argument("finite_n_Mk: n >= 1 required");
  if (n <= k) return 0.0; // falling product (n-1)...(n-k) vanishes

  const double c = 1.0 / gamma_index + 1.0;

  // Alternating binomial sum over r, largest binomial weights first is not
  // needed at these k; descending magnitude with compensation suffices.
  double sum = 0.0;
  double comp = 0.0;
  for (int r = 0; r < k; ++r) {
    const double z = 1.0 - (2.0 + r) / static_cast<double>(n);
    const double f = hyp2f1(2.0, 1.0, c, z);
    const double term = (r % 2 == 0 ? 1.0 : -1.0) * binomial(k - 1, r) * f;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  double falling = 1.0;
  for (int j = 1; j <= k; ++j) falling *= static_cast<double>(n - j);
  return gamma_index * k * falling / static_cast<double>(n) * sum;
}

MomentValue limit_moment(double gamma_index, int k) {
  if (!(gamma_index > 0.0 && gamma_index < 1.0))
    throw std::invalid_argument("limit_moment: gamma_index in (0,1) required");
  if (k < 1) throw std::invalid_argument("limit_moment: k >= 1 required");
  if (!(gamma_index < 1.0 / (k + 1)))
    return MomentValue::diverged(gamma_index, k);

  // gamma < 1/(k+1) makes every lower-order limit finite as well.
  const auto tri = CoefficientTriangle::build(k);
  double sum = 0.0;
  for (int l = 1; l <= k; ++l) {
    const MomentValue m = limit_Mk(gamma_index, l);
    sum += tri.at_double(k, l) * m.value;
  }
  return MomentValue::finite(sum, gamma_index, k);
}

double finite_n_moment(double gamma_index, long n, int k) {
  if (k < 1) throw std::invalid_argument("finite_n_moment: k >= 1 required");
  if (n < 1) throw std::invalid_argument("finite_n_moment: n >= 1 required");
  const auto tri = CoefficientTriangle::build(k);
  double sum = 0.0;
  for (int l = 1; l <= k; ++l)
    sum += tri.at_double(k, l) * finite_n_Mk(gamma_index, n, l);
  return sum;
}

} // namespace mtf
