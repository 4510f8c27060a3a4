#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace recwalk {

// splitmix64 finalizer, used to decorrelate (seed, stream) pairs.
std::uint64_t mix64(std::uint64_t x);

// Deterministic RNG handle. mt19937_64 and the 53-bit double construction are
// pinned by the standard, so a (seed, stream) pair reproduces bit-identical
// runs on any platform. One Rng per task; no shared mutable state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0,1), 53 random bits.
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0, rejection-free of modulo bias.
  std::uint64_t next_below(std::uint64_t n);

  bool bernoulli(double p) { return next_unit() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace recwalk
