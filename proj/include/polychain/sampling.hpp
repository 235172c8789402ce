#ifndef POLYCHAIN_SAMPLING_HPP
#define POLYCHAIN_SAMPLING_HPP

// Seeded point processes on the standard triangle.
//
// Streams are frozen for reproducibility:
//  * per-sample seeds are splitmix64(master ^ splitmix64(index));
//  * the generator is std::mt19937_64, whose output sequence is fixed by the
//    standard, and doubles are formed from its top 52 bits as
//    (k + 0.5) / 2^52, which lies in the open interval (0,1);
//  * a uniform point is (r*v, 1 - r) with r = sqrt(u), u, v uniform, i.e. the
//    square-root barycentric transform (no rejection);
//  * Poisson counts with mean below 30 use CDF inversion; larger means are
//    split into equal parts below 30 and summed, which is exact.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "polychain/chain.hpp"
#include "polychain/geometry.hpp"

namespace polychain {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in the open interval (0,1).
  double uniform() {
    const std::uint64_t k = engine_() >> 12;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-52;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline Point uniform_point(Rng& rng) {
  for (;;) {
    const double r = std::sqrt(rng.uniform());
    const double v = rng.uniform();
    const Point q{r * v, 1.0 - r};
    if (strictly_inside_standard(q)) return q;
  }
}

inline PointSample sample_uniform(std::size_t n, std::uint64_t seed) {
  PointSample out;
  out.seed = seed;
  out.points.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) out.points.push_back(uniform_point(rng));
  return out;
}

namespace detail {

inline std::uint64_t poisson_by_inversion(double mean, Rng& rng) {
  const double u = rng.uniform();
  std::uint64_t k = 0;
  double p = std::exp(-mean);
  double cdf = p;
  while (u > cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0 && cdf < u) break;  // u above the representable CDF
  }
  return k;
}

}  // namespace detail

inline std::uint64_t poisson_count(double mean, Rng& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("Poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  constexpr double kInversionLimit = 30.0;
  if (mean < kInversionLimit) return detail::poisson_by_inversion(mean, rng);
  const auto parts = static_cast<std::uint64_t>(std::ceil(mean / (kInversionLimit - 5.0)));
  const double each = mean / static_cast<double>(parts);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < parts; ++i) total += detail::poisson_by_inversion(each, rng);
  return total;
}

/// Homogeneous Poisson process of the given intensity (points per unit area)
/// on the standard triangle, whose area is 1/2.
inline PointSample sample_poisson(double intensity, std::uint64_t seed) {
  if (!(intensity >= 0.0)) throw std::invalid_argument("intensity must be >= 0");
  Rng rng(seed);
  const std::uint64_t count = poisson_count(intensity * Triangle::standard().area(), rng);
  PointSample out;
  out.seed = seed;
  out.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.points.push_back(uniform_point(rng));
  return out;
}

}  // namespace polychain

#endif  // POLYCHAIN_SAMPLING_HPP
