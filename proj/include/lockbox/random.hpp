#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lockbox/types.hpp"

namespace lockbox {

/// Source of all randomness in a run. Every random draw in the simulator
/// is a uniform choice among `n` outcomes, so the same code can be driven
/// by a seeded generator (Monte Carlo) or by an exhaustive branch
/// enumerator (exact probabilities).
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform value in [0, n). n must be >= 1.
  virtual std::uint64_t choose(std::uint64_t n) = 0;

  Bit bit() { return static_cast<Bit>(choose(2)); }
};

/// mt19937_64 with a rejection sampler, so draws are identical across
/// standard libraries (std::uniform_int_distribution is not).
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t choose(std::uint64_t n) override;

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform m-subset of {0..n-1}, returned in ascending order.
std::vector<std::size_t> sample_subset(RandomSource& rng, std::size_t n, std::size_t m);

}  // namespace lockbox
