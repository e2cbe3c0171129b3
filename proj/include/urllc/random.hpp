#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace urllc {

/// Distinct random streams drawn inside one trial. Keeping every consumer on
/// its own stream makes results independent of evaluation order.
enum class Stream : std::uint64_t {
  scenario = 0,
  greedy = 1,
  ita = 2,
  baseline = 3,
  feasibility_costs = 4,
};

namespace detail {

// splitmix64 finalizer; full-period bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Engine for one (seed, trial, stream) triple. Deterministic across
/// platforms and independent of how many draws other streams consume.
inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial, Stream stream) {
  std::uint64_t s = detail::mix64(seed);
  s = detail::mix64(s ^ detail::mix64(trial));
  s = detail::mix64(s ^ detail::mix64(static_cast<std::uint64_t>(stream)));
  return std::mt19937_64(s);
}

/// Uniform draw in [0,1) with 53 random bits. Hand-rolled because the
/// standard distributions are not bit-reproducible across implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi).
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
inline std::uint64_t uniform_int(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_int: bound must be >= 1");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Exponential(1) draw; -log1p(-u) keeps precision for small u and can
/// never hit log(0) since u < 1.
inline double exponential1(std::mt19937_64& rng) {
  return -std::log1p(-uniform01(rng));
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_int(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Random permutation of {0, ..., n-1}.
inline std::vector<int> permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  shuffle(p, rng);
  return p;
}

/// k items sampled without replacement from `items`, in random order.
template <typename T>
std::vector<T> sample(const std::vector<T>& items, std::size_t k, std::mt19937_64& rng) {
  if (k > items.size()) throw std::invalid_argument("sample: k exceeds population size");
  std::vector<T> pool = items;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_int(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace urllc
