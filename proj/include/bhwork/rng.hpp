#pragma once

#include <cmath>
#include <cstdint>

namespace bhwork {

// SplitMix64: tiny, fast, and fully specified by integer arithmetic, so
// streams are reproducible across platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Counter-derived per-sample seed: sample k of a run draws from its own
// stream, so samples can be generated in any order on any worker.
inline std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t sample_index) {
  SplitMix64 mixer(master_seed ^ (0x9E3779B97F4A7C15ull * (sample_index + 1)));
  return mixer.next_u64();
}

// Deterministic standard normal via Box-Muller (std::normal_distribution is
// not bit-stable across library implementations).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = rng_.next_double();
    double u2 = rng_.next_double();
    while (u1 <= 0.0) u1 = rng_.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  SplitMix64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bhwork
