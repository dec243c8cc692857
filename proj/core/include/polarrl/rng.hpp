#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_01.hpp>

namespace polarrl {

/// All randomness in the library flows through MT19937-64 paired with
/// Boost.Random distributions, whose algorithms are fixed in the headers and
/// therefore give identical streams on every platform.
using Rng = boost::random::mt19937_64;

/// Independent stream families. Each frame, time step or construction step
/// gets its own generator keyed by (base seed, stream, a, b).
enum class Stream : std::uint64_t {
  payload = 1,
  noise = 2,
  scheme = 3,
  bandit = 4,
  actions = 5,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t a,
                                    std::uint64_t b = 0) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ static_cast<std::uint64_t>(stream));
  h = mix64(h ^ a);
  return mix64(h ^ b);
}

inline Rng make_rng(std::uint64_t base, Stream stream, std::uint64_t a, std::uint64_t b = 0) {
  return Rng(derive_seed(base, stream, a, b));
}

inline double uniform01(Rng& rng) {
  boost::random::uniform_01<double> dist;
  return dist(rng);
}

}  // namespace polarrl
