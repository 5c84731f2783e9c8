#include "ltem/rng.hpp"

#include <cmath>

namespace ltem {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double SeededGenerator::normal(double mean, double stddev) {
  double u1 = 1.0 - uniform01();  // (0, 1]: keeps the log finite
  double u2 = uniform01();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  return mean + stddev * z;
}

}  // namespace ltem
