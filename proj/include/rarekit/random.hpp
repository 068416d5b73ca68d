#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace rarekit {

// Stateless seed derivation. A child seed is a pure function of the master
// seed and a path of 32-bit labels (universe index, tree index, fold, ...):
//
//   derive([])        = master
//   derive(p1..pk)    = mix(master ^ fold),
//   fold              = mix(... mix(mix(k + G) ^ (p1 + G)) ... ^ (pk + G))
//
// where mix is the SplitMix64 finalizer below and G = 0x9E3779B97F4A7C15.
struct SeedTree {
  std::uint64_t master = 0;
  std::vector<std::uint32_t> path;

  SeedTree child(std::uint32_t label) const {
    SeedTree out = *this;
    out.path.push_back(label);
    return out;
  }
};

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(const SeedTree& tree) noexcept;

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint32_t> path) {
  return derive_seed(SeedTree{master, std::vector<std::uint32_t>(path)});
}

// Random stream over mt19937_64, whose output sequence is fixed by the C++
// standard. The distributions are written out here because the standard
// library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n); n > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  // Standard normal via Box-Muller (one draw per call).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rarekit
