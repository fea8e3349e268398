#pragma once

// Deterministic random streams.  Every sampler here is spelled out explicitly
// (xoshiro256++ engine, splitmix64 seeding, polar normals, inverse-CDF Pareto)
// so that a seed reproduces the same byte stream on every build; the standard
// <random> distributions are implementation-defined and would not.

#include <cstdint>
#include <cmath>

namespace holderlab::rng {

inline std::uint64_t splitmix64_next(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64_next(s);
  }

  // Independent stream for one replica of a Monte Carlo ensemble.  The replica
  // index is mixed through splitmix64 so adjacent replicas share no state.
  static Stream for_replica(std::uint64_t base_seed, std::uint64_t replica) {
    std::uint64_t s = base_seed ^ (0xD1B54A32D192ED03ULL * (replica + 1));
    splitmix64_next(s);
    return Stream(splitmix64_next(s));
  }

  std::uint64_t next_u64() {  // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0,1]; safe as an inverse-CDF argument
  double u01_open_left() { return 1.0 - u01(); }

  double normal() {  // Marsaglia polar, deterministic spare caching
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  // symmetric Pareto: density (beta/2) x_min^beta |x|^{-beta-1} for |x| >= x_min
  double pareto_symmetric(double beta, double x_min) {
    const double mag = x_min * std::pow(u01_open_left(), -1.0 / beta);
    return (next_u64() >> 63) ? mag : -mag;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4]{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace holderlab::rng
