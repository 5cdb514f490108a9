#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ideaminer {

// Seeded generator whose outputs are fixed by the engine algorithm alone.
// <random> distributions are implementation-defined, so conversions are done
// here explicitly.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/u53";

  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1}.
  size_t index(size_t n) { return static_cast<size_t>(uniform() * static_cast<double>(n)); }

  // Index drawn proportionally to non-negative weights.
  size_t discrete(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.size() - 1;
  }

  uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ideaminer
