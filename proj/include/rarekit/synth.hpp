#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rarekit/dataset.hpp"

namespace rarekit::synth {

// y_i = sum_{j in truth} x_ij + e_i with x_ij, e_i iid N(0, 1).
// truth holds 0-based column indices; the default is variables 2, 5, 8.
struct ToyRegressionSpec {
  std::size_t n = 50;
  std::size_t d = 10;
  std::vector<std::size_t> truth{1, 4, 7};
  double noise_sd = 1.0;
};

Dataset toy_regression(const ToyRegressionSpec& spec, std::uint64_t seed);

// Points in the plane with uniform direction and radius uniform on [0, max_radius].
struct SphericalToy {
  Matrix points;
  std::vector<double> radius;
};

SphericalToy spherical_toy(std::size_t n, double max_radius, std::uint64_t seed);

// Two-class Gaussian mixture in the plane with a closed-form posterior:
// background N(0, I), rare class N(rare_mean, rare_sd^2 I) with prior
// rare_fraction.
struct RareMixture {
  double rare_fraction = 0.05;
  std::array<double, 2> rare_mean{1.5, 1.5};
  double rare_sd = 0.6;

  Dataset sample(std::size_t n, std::uint64_t seed) const;
  double posterior(std::span<const double> x) const;
};

// Fallback for the spam benchmark: n x d binary classification data mixing
// informative, redundant and noise columns with nonlinear class structure.
Dataset spam_like(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace rarekit::synth
