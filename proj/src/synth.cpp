#include "rarekit/synth.hpp"

#include <cmath>
#include <numbers>

#include "rarekit/error.hpp"
#include "rarekit/random.hpp"

namespace rarekit::synth {

Dataset toy_regression(const ToyRegressionSpec& spec, std::uint64_t seed) {
  require(spec.n >= 2 && spec.d >= 1, ErrorCode::invalid_argument, "toy needs n >= 2 and d >= 1");
  Rng rng(seed);
  Matrix x(spec.n, spec.d);
  std::vector<double> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.d; ++j) x(i, j) = rng.normal();
    double yi = spec.noise_sd * rng.normal();
    for (std::size_t j : spec.truth) {
      require(j < spec.d, ErrorCode::invalid_argument, "true variable out of range");
      yi += x(i, j);
    }
    y[i] = yi;
  }
  return make_dataset(std::move(x), std::move(y), ResponseKind::real);
}

SphericalToy spherical_toy(std::size_t n, double max_radius, std::uint64_t seed) {
  Rng rng(seed);
  SphericalToy toy{Matrix(n, 2), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    const double r = max_radius * rng.uniform();
    toy.points(i, 0) = r * std::cos(angle);
    toy.points(i, 1) = r * std::sin(angle);
    toy.radius[i] = r;
  }
  return toy;
}

Dataset RareMixture::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  Matrix x(n, 2);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool rare = rng.bernoulli(rare_fraction);
    for (std::size_t j = 0; j < 2; ++j) {
      x(i, j) = rare ? rare_mean[j] + rare_sd * rng.normal() : rng.normal();
    }
    y[i] = rare ? 1.0 : -1.0;
  }
  return make_dataset(std::move(x), std::move(y));
}

double RareMixture::posterior(std::span<const double> x) const {
  const double d0 = x[0] * x[0] + x[1] * x[1];
  const double d1 = ((x[0] - rare_mean[0]) * (x[0] - rare_mean[0]) +
                     (x[1] - rare_mean[1]) * (x[1] - rare_mean[1])) /
                    (rare_sd * rare_sd);
  // Densities share the (2 pi)^-1 factor.
  const double p0 = (1.0 - rare_fraction) * std::exp(-0.5 * d0);
  const double p1 = rare_fraction * std::exp(-0.5 * d1) / (rare_sd * rare_sd);
  return p1 / (p0 + p1);
}

Dataset spam_like(std::size_t n, std::size_t d, std::uint64_t seed) {
  constexpr std::size_t kLatent = 6;
  constexpr std::size_t kCopies = 2;
  require(d >= kLatent * kCopies + 1, ErrorCode::invalid_argument, "spam_like needs d >= 13");
  Rng rng(seed);
  Matrix x(n, d);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z[kLatent];
    for (double& v : z) v = rng.normal();
    double signal = z[0] * z[1];
    for (double v : z) signal += v;
    y[i] = signal + 0.3 * rng.normal() > 0.0 ? 1.0 : -1.0;
    // Column 0 is a noisy view of the whole signal, then two noisy copies of
    // each latent, then pure noise.
    x(i, 0) = signal + rng.normal();
    for (std::size_t j = 1; j < d; ++j) {
      const std::size_t c = j - 1;
      x(i, j) = c < kLatent * kCopies ? z[c % kLatent] + 0.8 * rng.normal() : rng.normal();
    }
  }
  return make_dataset(std::move(x), std::move(y));
}

}  // namespace rarekit::synth
