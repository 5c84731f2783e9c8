#pragma once

#include <cstdint>
#include <random>

namespace ltem {

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic variate source. A fixed seed plus a fixed call sequence
// always yields the same values, bit for bit, on every platform: mt19937_64
// is pinned by the standard and the distribution transforms below are our
// own (std::normal_distribution et al. are implementation-defined).
class SeededGenerator {
 public:
  explicit SeededGenerator(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Box-Muller, cosine branch only: two uniforms per draw, no cached state.
  double normal(double mean, double stddev);

  bool bernoulli(double p) { return uniform01() < p; }

  // Independent substream derived from (seed, stream). Used by the emulator
  // to decouple rate, base-RTT and loss draws on one link.
  SeededGenerator fork(std::uint64_t stream) const {
    return SeededGenerator(splitmix64(seed_ ^ splitmix64(stream + 0x51ED2B1ULL)));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace ltem
