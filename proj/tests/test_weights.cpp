#include "mtf/weights.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace mtf;

namespace {

struct MeanSe {
  double mean;
  double se;
};

template <class F>
MeanSe mc_mean(long draws, F&& f) {
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < draws; ++i) {
    const double v = f();
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double var = (sum2 / draws - mean * mean) * draws / (draws - 1.0);
  return {mean, std::sqrt(var / draws)};
}

// Median of the gamma = 1/2 stable law, solved from its distribution
// function F(x) = erfc(1 / (2 sqrt(x))) by bisection.
double levy_median() {
  double lo = 0.01, hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(1.0 / (2.0 * std::sqrt(mid))) < 0.5)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("weight model validation") {
  CHECK_THROWS_AS(WeightModel::stable(0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::stable(1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::gamma_weights(-1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::deterministic({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(WeightModel::deterministic({}), std::invalid_argument);
}

TEST_CASE("laplace_weight closed forms") {
  const auto stable = WeightModel::stable(0.5, 4);
  CHECK(laplace_weight(stable, 0, 0.0) == doctest::Approx(1.0));
  // spacing 1/4: phi(1) = exp(-1/4)
  CHECK(laplace_weight(stable, 2, 1.0) ==
        doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
  CHECK(laplace_weight(stable, 2, 1.0) == doctest::Approx(0.7788).epsilon(1e-4));

  const auto det = WeightModel::deterministic({1.0, 2.0});
  CHECK(laplace_weight(det, 1, 3.0) == doctest::Approx(std::exp(-6.0)));

  const auto gam = WeightModel::gamma_weights(2.5, 3);
  CHECK(laplace_weight(gam, 0, 1.0) == doctest::Approx(std::pow(2.0, -2.5)));

  CHECK_THROWS_AS(laplace_weight(stable, 0, -1.0), std::domain_error);
}

TEST_CASE("stable sampler calibrates against its Laplace transform") {
  const long draws = 100000;
  for (double g : {0.3, 0.5, 0.7}) {
    RngStream rng(101 + static_cast<std::uint64_t>(10 * g));
    std::vector<double> xs(draws);
    for (auto& x : xs) {
      x = sample_stable(g, 1.0, rng);
      REQUIRE(x > 0.0);
    }
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      std::size_t i = 0;
      const auto est = mc_mean(draws, [&] { return std::exp(-s * xs[i++]); });
      const double want = std::exp(-std::pow(s, g));
      INFO("gamma=", g, " s=", s);
      CHECK(std::abs(est.mean - want) <= 3.0 * est.se);
    }
  }
}

TEST_CASE("gamma weights calibrate against (1+s)^-theta") {
  const long draws = 100000;
  const auto model = WeightModel::gamma_weights(1.7, 2);
  RngStream rng(55);
  std::vector<double> ws(draws);
  for (auto& w : ws) w = sample_weight(model, 0, rng);
  for (double s : {0.5, 2.0}) {
    std::size_t i = 0;
    const auto est = mc_mean(draws, [&] { return std::exp(-s * ws[i++]); });
    CHECK(std::abs(est.mean - laplace_weight(model, 0, s)) <= 3.0 * est.se);
  }
}

TEST_CASE("gamma = 1/2 sampler hits the closed-form median") {
  const long draws = 100000;
  RngStream rng(202);
  std::vector<double> xs(draws);
  for (auto& x : xs) x = sample_stable(0.5, 1.0, rng);
  std::nth_element(xs.begin(), xs.begin() + draws / 2, xs.end());
  const double med = xs[draws / 2];
  const double want = levy_median();
  CHECK(want == doctest::Approx(1.0990).epsilon(1e-3));
  // sample-median standard error 1/(2 sqrt(N) f(m)) with the known density
  const double density =
      0.5 / std::sqrt(M_PI) * std::pow(want, -1.5) * std::exp(-0.25 / want);
  const double se = 1.0 / (2.0 * std::sqrt(static_cast<double>(draws)) * density);
  CHECK(std::abs(med - want) <= 3.0 * se);
}

TEST_CASE("stable sampler scale acts as a deterministic power transform") {
  const double g = 0.4;
  const double c = 3.0;
  RngStream a(77), b(77);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = sample_stable(g, 1.0, a);
    const double xc = sample_stable(g, c, b);
    CHECK(xc == doctest::Approx(std::pow(c, 1.0 / g) * x1).epsilon(1e-12));
  }
}

TEST_CASE("sample_popularities normalizes and records the weight sum") {
  RngStream rng(5);
  const auto det = WeightModel::deterministic({1.0, 1.0, 1.0, 1.0});
  const auto pop = sample_popularities(det, rng);
  for (double p : pop.p) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(pop.total_weight == doctest::Approx(4.0));

  const auto stable = WeightModel::stable(0.3, 100);
  for (int rep = 0; rep < 50; ++rep) {
    const auto v = sample_popularities(stable, rng);
    double sum = 0.0;
    for (double p : v.p) {
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("flat gamma weights give the flat Dirichlet") {
  // theta = 1, n = 3: p_1 ~ Beta(1, 2), mean 1/3
  const auto model = WeightModel::gamma_weights(1.0, 3);
  RngStream rng(303);
  const auto est = mc_mean(100000, [&] {
    return sample_popularities(model, rng).p[0];
  });
  CHECK(std::abs(est.mean - 1.0 / 3.0) <= 3.0 * est.se);
}

TEST_CASE("popularities are exchangeable in distribution") {
  const auto model = WeightModel::stable(0.4, 5);
  RngStream rng(404);
  const long draws = 50000;
  std::vector<double> mean(5, 0.0), m2(5, 0.0);
  for (long i = 0; i < draws; ++i) {
    const auto pop = sample_popularities(model, rng);
    for (int j = 0; j < 5; ++j) {
      mean[j] += pop.p[j];
      m2[j] += pop.p[j] * pop.p[j];
    }
  }
  for (int j = 0; j < 5; ++j) {
    mean[j] /= draws;
    const double var = m2[j] / draws - mean[j] * mean[j];
    const double se = std::sqrt(var / draws);
    CHECK(std::abs(mean[j] - 0.2) <= 3.0 * se);
  }
}
