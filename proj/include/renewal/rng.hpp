#pragma once

#include <cstdint>
#include <random>

namespace renewal {

// Seeded source of uniforms on the open interval (0, 1). The mapping from the
// 64-bit engine output is fixed here so sample streams do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for task `index` of a run seeded with `base`.
  static Rng derived(std::uint64_t base, std::uint64_t index) { return Rng(base + index); }

  double uniform() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace renewal
