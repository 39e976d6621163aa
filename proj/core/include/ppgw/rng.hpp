#pragma once

#include <cstdint>
#include <random>

namespace ppgw {

/// Deterministic 64-bit generator. The seed fully determines the stream.
///
/// Wraps std::mt19937_64 (period 2^19937 - 1), seeded through splitmix64 so
/// that nearby seeds (0, 1, 2, ...) give unrelated streams. Satisfies
/// UniformRandomBitGenerator, so it can drive <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  /// Independent stream for replication `index` of a study seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on (0, 1], built from the top 53 bits.
  double uniform01();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replication `index` derived from a study seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ppgw
