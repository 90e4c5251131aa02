#ifndef MTF_MONTECARLO_HPP
#define MTF_MONTECARLO_HPP

#include "mtf/rng.hpp"
#include "mtf/weights.hpp"

#include <cstdint>
#include <vector>

namespace mtf {

enum class McMethod { Chain, ExactAges };

/// A Monte Carlo moment estimate. `samples` counts the independent units
/// the mean was taken over (replicate means for the two-level schemes),
/// and std_error is their sample standard deviation / sqrt(samples).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  McMethod method = McMethod::Chain;
  int order = 1;
};

/// List ordering, front = top of the list. `order[pos]` is the item at
/// position pos; `position[item]` inverts it.
struct ListState {
  std::vector<int> order;
  std::vector<int> position;

  static ListState identity(int n);
  static ListState uniform(int n, RngStream& rng);

  int n() const noexcept { return static_cast<int>(order.size()); }
  bool is_permutation() const;
};

/// Serve a request for `item`: returns the search cost (number of items
/// strictly above it, 0-based) and moves it to the front.
int apply_request(ListState& state, int item);

/// One step of the move-to-front chain: samples the requested item from p,
/// applies it, returns the search cost.
int chain_step(ListState& state, const PopularityVector& p, RngStream& rng);

/// One exact draw from the stationary search-cost law given p, via the
/// exponential-age representation: request I ~ p, independent ages
/// E_j ~ Exp(p_j), cost = #{j != I : E_j < E_I}.
int exact_stationary_cost(const PopularityVector& p, RngStream& rng);

/// Default chain burn-in: max(50 n, n^2) requests from a uniform random
/// start. The quadratic term is what lets rarely requested items settle
/// into their stationary depth under heavy-tailed popularities.
long default_burn_in(int n);

/// Chain-simulation estimates of E[S_n^k] for k = 1..k_max, annealed over
/// the random weights: each replicate draws fresh popularities, burns in,
/// then records `samples` costs. Standard errors are taken across
/// replicate means. Replicate r draws from worker_stream(seed, r).
std::vector<McEstimate> chain_estimate(const WeightModel& model, int k_max,
                                       long burn_in, long samples,
                                       long replicates, std::uint64_t seed);

/// Two-level Monte Carlo with the chosen stationary sampler: outer loop
/// over weight draws, inner loop over cost draws. Chain method uses the
/// default burn-in.
std::vector<McEstimate> mc_moments(const WeightModel& model, int k_max,
                                   long weight_draws, long costs_per_draw,
                                   std::uint64_t seed, McMethod method);

} // namespace mtf

#endif
