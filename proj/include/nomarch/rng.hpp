#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "nomarch/errors.hpp"

namespace nomarch {

// Deterministic 64-bit generator (splitmix64). Used instead of std::mt19937
// with std distributions so that streams are bit-identical across platforms
// and standard-library versions.
class rng {
 public:
  explicit rng(std::uint64_t seed) : state_(seed) {}

  // Independent stream for one unit of work (a restart index, for example).
  // Units derived from the same seed but different stream ids are
  // decorrelated, so work units can run in any order or in parallel.
  static rng derive(std::uint64_t seed, std::uint64_t stream) {
    rng r(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
    r.next();
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw dimension_error("rng.below: n must be positive");
    const std::uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    const std::uint64_t bound = UINT64_MAX - rem;
    std::uint64_t v = next();
    while (v > bound) v = next();
    return v % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<int> sample_distinct(int k, int n) {
    if (k < 0 || n < 0 || k > n)
      throw cardinality_error("sample_distinct: need 0 <= k <= n");
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      out.push_back(pool[static_cast<std::size_t>(i)]);
    }
    return out;
  }

 private:
  std::uint64_t state_;
};

}  // namespace nomarch
