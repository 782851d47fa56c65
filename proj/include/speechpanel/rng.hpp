#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace speechpanel {

// Seeded generator with a fully specified output sequence: the 64-bit
// Mersenne Twister (std::mt19937_64, whose sequence the standard fixes),
// with uniform, normal and bounded-integer transforms defined here rather
// than by the standard library's implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

  // Uniform integer in [0, n), unbiased by rejection.
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of sub-stream `stream` under `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace speechpanel
