#include "lockbox/random.hpp"

#include <algorithm>
#include <numeric>

namespace lockbox {

std::uint64_t SeededRandom::choose(std::uint64_t n) {
  if (n == 0) throw SimError(Errc::InvalidArgument, "choose(0)");
  if (n == 1) return 0;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> sample_subset(RandomSource& rng, std::size_t n, std::size_t m) {
  if (m > n) throw SimError(Errc::InvalidArgument, "subset larger than population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // partial Fisher-Yates
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.choose(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace lockbox
