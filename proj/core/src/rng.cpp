#include "ppgw/rng.hpp"

namespace ppgw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(derive_seed(seed, index));
}

double Rng::uniform01() {
  // (k + 1) / 2^53 for k in [0, 2^53): never 0, exactly 1 at the top.
  const std::uint64_t k = engine_() >> 11;
  return static_cast<double>(k + 1) * 0x1.0p-53;
}

}  // namespace ppgw
