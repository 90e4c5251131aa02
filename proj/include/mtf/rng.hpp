#ifndef MTF_RNG_HPP
#define MTF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mtf {

/// Seeded random stream. All samplers in this project draw from one of
/// these; the transforms below are hand-rolled on top of the raw engine
/// output so that a given seed reproduces the same sequence everywhere.
///
/// Parallel use: one stream per worker, never shared. Worker streams are
/// derived from a base seed by the splitting rule in worker_stream().
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on the open interval (0, 1): (x >> 11 + 0.5) * 2^-53.
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential via inversion.
  double exponential() { return -std::log(uniform01()); }

  /// Standard normal via Marsaglia's polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  /// Gamma(shape, rate 1) via Marsaglia-Tsang, with the U^(1/shape)
  /// boost for shape < 1.
  double gamma_shape(double shape);

  /// Uniform index in {0, ..., n-1} by rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= bound);
    return static_cast<std::size_t>(x % n);
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Splitting rule for parallel or replicated work: worker k draws from a
/// fresh stream seeded with base_seed + k. Replicate aggregation must be
/// ordered by k so results do not depend on scheduling.
inline RngStream worker_stream(std::uint64_t base_seed, std::uint64_t worker) {
  return RngStream(base_seed + worker);
}

} // namespace mtf

#endif
