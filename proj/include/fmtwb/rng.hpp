#pragma once

#include <cstdint>
#include <random>

namespace fmtwb {

// Deterministic random draws.  std::uniform_int_distribution is
// implementation-defined, so bounded draws are done by masked rejection on
// the raw mt19937_64 stream; identical seeds give identical sequences on
// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    while (true) {
      const std::uint64_t draw = next() & mask;
      if (draw < n) return draw;
    }
  }

  // Uniform in [lo, hi], inclusive.
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() & 1) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fmtwb
