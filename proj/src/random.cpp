#include "rarekit/random.hpp"

#include <cmath>
#include <numbers>

namespace rarekit {

std::uint64_t derive_seed(const SeedTree& tree) noexcept {
  if (tree.path.empty()) return tree.master;
  std::uint64_t fold = splitmix_finalize(static_cast<std::uint64_t>(tree.path.size()) + kGoldenGamma);
  for (std::uint32_t label : tree.path) {
    fold = splitmix_finalize(fold ^ (static_cast<std::uint64_t>(label) + kGoldenGamma));
  }
  return splitmix_finalize(tree.master ^ fold);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // Rejection on the top of the range keeps every residue equally likely.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rarekit
