#ifndef TOKENLAB_RNG_HPP
#define TOKENLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace tokenlab {

// SplitMix64 finalizer; used to spread seeds and derive substream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Explicit random stream: mt19937_64 engine plus portable transforms.
// All variates are derived from engine words through fixed arithmetic,
// so identical (seed, stream) pairs reproduce byte-identical draws on
// any conforming platform.  Streams derived from distinct ids are
// statistically independent for Monte Carlo purposes.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(mix64(seed)) {}

  static RngStream substream(std::uint64_t seed, std::uint64_t id) {
    return RngStream(mix64(seed) ^ mix64(id + 0x517cc1b727220a95ull));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on (0, 1]; never returns 0, safe under log().
  double uniform01() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform01()));
    double a = 2.0 * M_PI * uniform01();
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Marsaglia-Tsang rejection; shape boost for shape < 1.
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

inline double RngStream::gamma(double shape, double rate) {
  if (shape < 1.0) {
    double g = gamma(shape + 1.0, 1.0);
    return g * std::pow(uniform01(), 1.0 / shape) / rate;
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform01();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

}  // namespace tokenlab

#endif  // TOKENLAB_RNG_HPP
