#pragma once

// Seed derivation and block-parallel loops whose results do not depend on
// the number of worker threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace rauzy {

/// Default number of samples per independently seeded block.
inline constexpr std::size_t kBlockSize = 4096;

/// splitmix64 finalizer applied to (seed, stream); used to seed one RNG per block.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

inline std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(mix_seed(seed, block));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform double in (0, 1).
inline double uniform_open01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
}

/// Runs body(block) for block in [0, blocks) on up to `workers` threads.
/// Blocks are handed out dynamically; callers write results into per-block slots.
void for_each_block(std::size_t blocks, unsigned workers, const std::function<void(std::size_t)>& body);

/// Number of blocks needed for `count` samples.
inline std::size_t block_count(std::size_t count, std::size_t block_size = kBlockSize) {
  return (count + block_size - 1) / block_size;
}

}  // namespace rauzy
