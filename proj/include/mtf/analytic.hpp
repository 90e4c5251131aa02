#ifndef MTF_ANALYTIC_HPP
#define MTF_ANALYTIC_HPP

#include "mtf/errors.hpp"

#include <vector>

namespace mtf {

using wide_uint = unsigned __int128;

/// Integer coefficients a_l^(k) that assemble moments of the search cost
/// from the building blocks M_{k,n}(0):
///
///   E[S_n^k] = sum_{l=1..k} a_l^(k) M_{l,n}(0)
///
/// Rows follow a_1^(k) = a_k^(k) = 1 and
/// a_l^(k) = a_{l-1}^(k-1) + l a_l^(k-1); the entries coincide with
/// Stirling numbers of the second kind.
class CoefficientTriangle {
public:
  /// Build rows 1..k_max exactly. Requires 1 <= k_max <= 64; throws
  /// OverflowError naming the first row whose entries exceed 128 bits.
  static CoefficientTriangle build(int k_max);

  int k_max() const noexcept { return static_cast<int>(rows_.size()); }

  /// Entry a_l^(k), 1-indexed: 1 <= l <= k <= k_max().
  wide_uint at(int k, int l) const;

  double at_double(int k, int l) const;

  const std::vector<wide_uint>& row(int k) const;

private:
  std::vector<std::vector<wide_uint>> rows_;
};

/// A limiting moment quantity: finite value, or divergent. For the limit
/// formulas divergence holds exactly when gamma_index >= 1/(order+1).
struct MomentValue {
  double value = 0.0;
  bool divergent = false;
  double gamma_index = 0.0;
  int order = 0;

  static MomentValue finite(double v, double g, int k) {
    return MomentValue{v, false, g, k};
  }
  static MomentValue diverged(double g, int k) {
    return MomentValue{0.0, true, g, k};
  }
};

/// Limit of M_{k,n}(0) as n grows: (k!)^2 / (1/gamma - k - 1)_k when
/// gamma < 1/(k+1), divergent otherwise (the boundary counts as
/// divergent: the Pochhammer factor vanishes there).
MomentValue limit_Mk(double gamma_index, int k);

/// M_{k,n}(0) at finite n via the hypergeometric identity
///
///   gamma k (n-1)...(n-k) / n *
///     sum_{r=0..k-1} (-1)^r C(k-1, r) 2F1(2, 1; 1/gamma + 1; 1 - (2+r)/n)
///
/// Returns 0 for n <= k (the falling product vanishes).
double finite_n_Mk(double gamma_index, long n, int k);

/// Limiting k-th moment of the stationary search cost:
/// sum_l a_l^(k) limit_Ml when gamma < 1/(k+1), divergent otherwise.
MomentValue limit_moment(double gamma_index, int k);

/// k-th moment of the stationary search cost at finite n; always finite.
double finite_n_moment(double gamma_index, long n, int k);

} // namespace mtf

#endif
