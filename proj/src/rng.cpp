#include "recwalk/rng.hpp"

#include <stdexcept>

namespace recwalk {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : eng_(mix64(seed ^ mix64(stream))) {}

std::uint64_t Rng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::next_below: n must be > 0");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  for (;;) {
    std::uint64_t r = eng_();
    std::uint64_t q = r % n;
    if (r - q <= max - (n - 1)) return q;
  }
}

}  // namespace recwalk
