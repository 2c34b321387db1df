#pragma once

#include <cstdint>
#include <random>

namespace immunoscan {

/// Random substream for one trial. The engine state depends only on
/// (seed, trial), so trials can run in any order or on any thread.
inline std::mt19937_64 trial_substream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform double on [0, 1) from the top 53 bits of one engine output.
/// Portable across standard libraries, unlike uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Unbiased integer on {0, 1, 2}.
inline int uniform_ternary(std::mt19937_64& engine) {
  // 2^64 - 1 is the only output that would bias x % 3.
  std::uint64_t x;
  do {
    x = engine();
  } while (x == UINT64_MAX);
  return static_cast<int>(x % 3);
}

}  // namespace immunoscan
