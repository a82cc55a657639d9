#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace pmt {

/// Boost's engine and distributions give the same stream on every platform.
using Rng = boost::random::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) { return boost::random::uniform_01<double>()(rng); }

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[uniform_index(rng, i)]);
}

/// Independent stream keyed by (seed, label), e.g. one per task so draws do not depend on call order.
inline Rng derived_rng(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : label) h = (h ^ c) * 1099511628211ULL;
  return Rng(h);
}

}  // namespace pmt
