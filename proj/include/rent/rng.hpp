#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rent {

// SplitMix64 mixing step. Used to derive per-stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named streams so every random draw in a run is reachable from the master
// seed. derive_seed(master, stream, k) is the documented reproducibility
// contract; see README.
namespace seed_stream {
constexpr std::uint64_t kSplit = 1;
constexpr std::uint64_t kSubsample = 2;
constexpr std::uint64_t kSynthetic = 3;
constexpr std::uint64_t kVs1 = 4;
constexpr std::uint64_t kVs2 = 5;
constexpr std::uint64_t kStability = 6;
}  // namespace seed_stream

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id,
                                 std::uint64_t k) {
  return splitmix64(splitmix64(splitmix64(master_seed) ^ stream_id) ^ k);
}

// Seedable generator with pinned draw algorithms. std::mt19937_64 output is
// specified by the standard, but the std distributions are not; the draw
// methods below are implemented here so identical seeds give identical
// results on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, bound) by rejection sampling; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform real in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller, caching the spare deviate.
  double normal();

  // k distinct indices from {0, ..., n-1}, returned sorted.
  std::vector<int> sample_without_replacement(int n, int k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rent
