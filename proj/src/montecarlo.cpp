#include "mtf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mtf {

namespace {

std::vector<double> prefix_sums(const std::vector<double>& p) {
  std::vector<double> prefix(p.size());
  double run = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    run += p[i];
    prefix[i] = run;
  }
  return prefix;
}

int pick_item(const std::vector<double>& prefix, double u) {
  const double target = u * prefix.back();
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
  const auto idx = it == prefix.end() ? prefix.size() - 1
                                      : static_cast<std::size_t>(it - prefix.begin());
  return static_cast<int>(idx);
}

// Debug builds check every step on small lists (the O(n) scan would
// dominate the quadratic burn-in on large ones); release builds sample.
void check_state(const ListState& state, long step_index) {
#ifdef NDEBUG
  if (step_index % 1000 != 0) return;
#else
  if (state.n() > 64 && step_index % 101 != 0) return;
#endif
  if (!state.is_permutation())
    throw std::logic_error("move-to-front state lost permutation property");
}

// Mean/stderr across replicate means for each moment order.
std::vector<McEstimate> aggregate(const std::vector<std::vector<double>>& rep_means,
                                  int k_max, std::uint64_t seed,
                                  McMethod method, long inner_samples) {
  const long reps = static_cast<long>(rep_means.size());
  std::vector<McEstimate> out(k_max);
  for (int k = 1; k <= k_max; ++k) {
    double mean = 0.0;
    for (const auto& rm : rep_means) mean += rm[k - 1];
    mean /= static_cast<double>(reps);

    double se = 0.0;
    long units = reps;
    if (reps >= 2) {
      double ss = 0.0;
      for (const auto& rm : rep_means) {
        const double d = rm[k - 1] - mean;
        ss += d * d;
      }
      se = std::sqrt(ss / (reps - 1) / reps);
    } else {
      units = inner_samples;
    }
    out[k - 1] = McEstimate{mean, se, units, seed, method, k};
  }
  return out;
}

} // namespace

ListState ListState::identity(int n) {
  ListState s;
  s.order.resize(n);
  s.position.resize(n);
  std::iota(s.order.begin(), s.order.end(), 0);
  std::iota(s.position.begin(), s.position.end(), 0);
  return s;
}

ListState ListState::uniform(int n, RngStream& rng) {
  ListState s = identity(n);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_index(i + 1));
    std::swap(s.order[i], s.order[j]);
  }
  for (int pos = 0; pos < n; ++pos) s.position[s.order[pos]] = pos;
  return s;
}

bool ListState::is_permutation() const {
  if (order.size() != position.size()) return false;
  std::vector<bool> seen(order.size(), false);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int item = order[pos];
    if (item < 0 || item >= static_cast<int>(order.size())) return false;
    if (seen[item]) return false;
    seen[item] = true;
    if (position[item] != static_cast<int>(pos)) return false;
  }
  return true;
}

int apply_request(ListState& state, int item) {
  if (item < 0 || item >= state.n())
    throw std::out_of_range("apply_request: item out of range");
  const int pos = state.position[item];
  for (int q = pos; q > 0; --q) {
    state.order[q] = state.order[q - 1];
    state.position[state.order[q]] = q;
  }
  state.order[0] = item;
  state.position[item] = 0;
  return pos;
}

int chain_step(ListState& state, const PopularityVector& p, RngStream& rng) {
  const auto prefix = prefix_sums(p.p);
  return apply_request(state, pick_item(prefix, rng.uniform01()));
}

int exact_stationary_cost(const PopularityVector& p, RngStream& rng) {
  const int n = p.n();
  const auto prefix = prefix_sums(p.p);
  const int requested = pick_item(prefix, rng.uniform01());

  std::vector<double> age(n);
  for (int j = 0; j < n; ++j) age[j] = rng.exponential() / p.p[j];

  int cost = 0;
  for (int j = 0; j < n; ++j)
    if (j != requested && age[j] < age[requested]) ++cost;
  return cost;
}

long default_burn_in(int n) {
  // 50 n covers mixing of the frequently requested items, but with
  // heavy-tailed popularities the stationary order of the rarely
  // requested block is sorted by popularity, which the chain only learns
  // by visiting those items. n^2 requests reach items down to
  // p ~ 1/n^2, enough to keep the second-moment bias below the Monte
  // Carlo noise at desk scale.
  return std::max(50L * n, static_cast<long>(n) * n);
}

std::vector<McEstimate> chain_estimate(const WeightModel& model, int k_max,
                                       long burn_in, long samples,
                                       long replicates, std::uint64_t seed) {
  if (k_max < 1) throw std::invalid_argument("chain_estimate: k_max >= 1 required");
  if (burn_in < 0) throw std::invalid_argument("chain_estimate: burn_in >= 0 required");
  if (samples < 2) throw std::invalid_argument("chain_estimate: samples >= 2 required");
  if (replicates < 1) throw std::invalid_argument("chain_estimate: replicates >= 1 required");

  std::vector<std::vector<double>> rep_means(replicates);
  for (long r = 0; r < replicates; ++r) {
    RngStream rng = worker_stream(seed, static_cast<std::uint64_t>(r));
    const PopularityVector pop = sample_popularities(model, rng);
    const auto prefix = prefix_sums(pop.p);
    ListState state = ListState::uniform(model.n(), rng);

    long step_index = 0;
    for (long b = 0; b < burn_in; ++b) {
      apply_request(state, pick_item(prefix, rng.uniform01()));
      check_state(state, ++step_index);
    }

    std::vector<double> sums(k_max, 0.0);
    for (long s = 0; s < samples; ++s) {
      const int cost = apply_request(state, pick_item(prefix, rng.uniform01()));
      check_state(state, ++step_index);
      double power = 1.0;
      for (int k = 0; k < k_max; ++k) {
        power *= cost;
        sums[k] += power;
      }
    }
    rep_means[r].resize(k_max);
    for (int k = 0; k < k_max; ++k)
      rep_means[r][k] = sums[k] / static_cast<double>(samples);
  }
  return aggregate(rep_means, k_max, seed, McMethod::Chain, samples);
}

std::vector<McEstimate> mc_moments(const WeightModel& model, int k_max,
                                   long weight_draws, long costs_per_draw,
                                   std::uint64_t seed, McMethod method) {
  if (k_max < 1) throw std::invalid_argument("mc_moments: k_max >= 1 required");
  if (weight_draws < 2)
    throw std::invalid_argument("mc_moments: weight_draws >= 2 required");
  if (costs_per_draw < 1)
    throw std::invalid_argument("mc_moments: costs_per_draw >= 1 required");

  if (method == McMethod::Chain)
    return chain_estimate(model, k_max, default_burn_in(model.n()),
                          costs_per_draw, weight_draws, seed);

  std::vector<std::vector<double>> rep_means(weight_draws);
  for (long r = 0; r < weight_draws; ++r) {
    RngStream rng = worker_stream(seed, static_cast<std::uint64_t>(r));
    const PopularityVector pop = sample_popularities(model, rng);
    std::vector<double> sums(k_max, 0.0);
    for (long s = 0; s < costs_per_draw; ++s) {
      const int cost = exact_stationary_cost(pop, rng);
      double power = 1.0;
      for (int k = 0; k < k_max; ++k) {
        power *= cost;
        sums[k] += power;
      }
    }
    rep_means[r].resize(k_max);
    for (int k = 0; k < k_max; ++k)
      rep_means[r][k] = sums[k] / static_cast<double>(costs_per_draw);
  }
  return aggregate(rep_means, k_max, seed, McMethod::ExactAges, costs_per_draw);
}

} // namespace mtf
