#pragma once

#include <cstdint>

namespace ccn {

// splitmix64 step; the standard seed-expansion generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic per-stream seed: replication i of a run seeded with `master`
// draws from derive_seed(master, i). Streams are independent of iteration
// order, so permuting replications cannot change aggregates.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (stream + 0x9E3779B97F4A7C15ULL) * 0xD1B54A32D192ED03ULL;
  splitmix64(s);
  return splitmix64(s);
}

}  // namespace ccn
