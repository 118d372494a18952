#pragma once

#include <cstdint>
#include <random>

namespace mibench {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stream split contract: stream k of seed s is an mt19937_64 seeded from a
// seed_seq of two splitmix64 outputs of (s + (k+1)*golden). Independent
// generators may therefore be derived from one user-facing seed by stream id.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t state = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  const std::uint64_t a = splitmix64(state);
  const std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

// Stream ids used by the run harness; one place so runs stay reproducible.
namespace rng_stream {
constexpr std::uint64_t kCriticInit = 1;
constexpr std::uint64_t kData = 2;
constexpr std::uint64_t kBankBuild = 3;
constexpr std::uint64_t kEmbeddingMeans = 4;
constexpr std::uint64_t kDecodability = 5;
}  // namespace rng_stream

}  // namespace mibench
