// Counter-based random streams for reproducible parallel Monte Carlo.
//
// Every sampler in this project draws from CounterRng(seed, index[, lane]):
// the i-th draw of a stream depends only on (seed, index, lane, i), so the
// same seed produces bit-identical samples no matter how work is scheduled
// across threads.
#pragma once

#include <cmath>
#include <cstdint>

namespace plancklab {

inline constexpr const char* kGeneratorId = "splitmix64/box-muller";

// splitmix64 step (Steele, Lea & Flood).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One-shot scramble of an arbitrary 64-bit value.
inline std::uint64_t scramble64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64(s);
}

// Derives an independent sub-seed, e.g. for the two sides of a comparison
// harness or the independent atomic/continuous amplitude sets.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t lane) {
  return scramble64(seed ^ scramble64(lane ^ 0xd1b54a32d192ed03ULL));
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0)
      : state_(scramble64(seed) ^ scramble64(index ^ 0x9e3779b97f4a7c15ULL) ^
               scramble64(lane ^ 0xbf58476d1ce4e5b9ULL)) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Box-Muller pair of independent standard normals. Always consumes exactly
  // two uniforms, so the draw count per sample is fixed.
  void next_gauss_pair(double& g0, double& g1) {
    const double u = next_unit_open();
    const double v = next_unit();
    const double rho = std::sqrt(-2.0 * std::log(u));
    const double phi = 6.283185307179586476925286766559 * v;
    g0 = rho * std::cos(phi);
    g1 = rho * std::sin(phi);
  }

  double next_gauss() {
    double a, b;
    next_gauss_pair(a, b);
    return a;
  }

 private:
  std::uint64_t state_;
};

}  // namespace plancklab
