#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace debris {

// SplitMix64 finalizer; derives independent stream seeds from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// mt19937_64 with distribution code written out here, so sequences do not
// depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n); n > 0.
  std::size_t below(std::size_t n);
  // Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace debris
