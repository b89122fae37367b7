#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wassci {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Split-stream random source: (seed, stream) fully determines the sequence,
/// so trial-parallel code draws from independent streams without any shared
/// state. Engine is mt19937_64 seeded through SplitMix64; the samplers below
/// are fixed closed-form transforms, keeping runs bit-reproducible on a given
/// build regardless of thread count.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * (stream + 1));
    const std::uint64_t hi = splitmix64_next(s);
    const std::uint64_t lo = splitmix64_next(s);
    engine_.seed(hi ^ (lo << 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1); never returns an exact endpoint.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (one draw per call).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Integer in [0, bound) by rejection-free scaling (bound << 2^53).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wassci
