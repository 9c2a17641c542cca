#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace secnet {

using Engine = std::mt19937_64;

/// Entity classes that own an independent random stream inside a trial, so
/// that e.g. adding eavesdroppers never perturbs the UAV layout.
enum class StreamClass : std::uint64_t {
  kParents = 1,
  kMarks = 2,
  kUsers = 3,
  kEves = 4,
  kFading = 5,
  kLinks = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based derivation: the seed depends only on (master, path), never on
/// how many draws other streams have consumed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

inline Engine make_engine(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Engine{derive_seed(master, path)};
}

inline Engine trial_engine(std::uint64_t master, std::uint64_t trial, StreamClass cls) {
  return make_engine(master, {trial, static_cast<std::uint64_t>(cls)});
}

/// Uniform double in [0,1) with 53 random bits.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace secnet
