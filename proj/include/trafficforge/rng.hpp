#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "trafficforge/error.hpp"

namespace trafficforge {

// Default seed for every stochastic operation; the CLI overrides it with
// --seed or replaces it with a time-based value under --random.
inline constexpr std::uint64_t kDefaultSeed = 23;

// Deterministic random stream. All sampling goes through the helpers below
// instead of <random> distributions, so a fixed seed produces the same
// output on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform integer on [0, n); unbiased via multiply-shift rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::invalid_parameter, "uniform_index: n must be positive");
    auto wide = static_cast<unsigned __int128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(wide);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        wide = static_cast<unsigned __int128>(next_u64()) * n;
        low = static_cast<std::uint64_t>(wide);
      }
    }
    return static_cast<std::uint64_t>(wide >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Number of successes in n Bernoulli(p) trials.
  int binomial(int n, double p) {
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      if (bernoulli(p)) ++hits;
    }
    return hits;
  }

  // Index sampled proportionally to the weights; total mass must be positive.
  std::size_t weighted_index(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) {
      if (w < 0) fail(ErrorCode::invalid_weights, "negative weight");
      total += w;
    }
    if (total <= 0) fail(ErrorCode::invalid_weights, "all weights are zero");
    const double target = uniform_real(0, total);
    double cumulative = 0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0) continue;
      last_positive = i;
      cumulative += weights[i];
      if (target < cumulative) return i;
    }
    return last_positive;  // rounding pushed the target past the final sum
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trafficforge
