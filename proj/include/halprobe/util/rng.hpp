#pragma once

#include <cstdint>
#include <random>

namespace halprobe::util {

// Deterministic random helpers on top of std::mt19937_64.
//
// The standard specifies the mt19937_64 engine bit-exactly but leaves
// distribution algorithms implementation-defined, so the simulator and
// property generators use these fixed mappings instead of <random>
// distributions. Results are identical across platforms and toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [lo, hi], inclusive. Uses rejection sampling so the
  // result is unbiased and reproducible.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace halprobe::util
