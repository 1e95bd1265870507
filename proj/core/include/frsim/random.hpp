#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace frsim {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Child seed for a labelled sub-stream. Depends only on its arguments, so a
/// run or a stream can be reproduced in isolation.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(parent);
  for (auto p : path) s = splitmix64(s ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  return s;
}

/// Stream labels inside one Monte Carlo run.
enum class Stream : std::uint64_t {
  Topology = 1,
  Requests = 2,
  ChannelErrh = 3,
  ChannelHelper = 4,
  ChannelRelayLink = 5,
  Agents = 6,
  Baseline = 7,
  CacheOrder = 8,
};

inline Rng make_stream(std::uint64_t run_seed, Stream stream, std::uint64_t phase = 0) {
  return Rng(derive_seed(run_seed, {static_cast<std::uint64_t>(stream), phase}));
}

}  // namespace frsim
