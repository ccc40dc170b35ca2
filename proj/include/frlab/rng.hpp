#pragma once

#include <cstdint>
#include <random>

namespace frlab {

// splitmix64 finalizer, used to key independent substreams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator keyed by (seed, stream). Growing the stream count
// never perturbs existing streams.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(mix64(seed) >> 32),
                    static_cast<std::uint32_t>(mix64(seed)),
                    static_cast<std::uint32_t>(mix64(stream ^ 0xabcdef12ULL) >> 32),
                    static_cast<std::uint32_t>(mix64(stream ^ 0xabcdef12ULL))};
  return std::mt19937_64(seq);
}

}  // namespace frlab
