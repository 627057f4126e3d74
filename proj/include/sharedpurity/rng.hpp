#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace sharedpurity {

// splitmix64 finalizer; used to derive independent per-index stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic random source. mt19937_64 output is fully specified by the
// standard; the uniform/normal transforms below are written out explicitly
// because the std distribution objects are implementation-defined and would
// break bit-reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // independent stream for (seed, index); results do not depend on how work
  // is scheduled across samples or optimizer starts
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix_seed(seed, index));
  }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform in (0, 1]; used for half-open parameter ranges and Box-Muller
  double uniform_pos() { return 1.0 - uniform(); }

  // standard normal via Box-Muller (pair cached)
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double t = 2.0 * M_PI * uniform();
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sharedpurity
