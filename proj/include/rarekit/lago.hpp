#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rarekit/dataset.hpp"

namespace rarekit {

enum class LagoVariant { spherical, elliptical };

std::string to_string(LagoVariant v);
LagoVariant parse_lago_variant(const std::string& name);

// Rare-class ranking function
//   f(x) = sum_{x_i in C1} |R_i| phi(x; x_i, alpha R_i)
// with phi the normalised Gaussian kernel of shape R and R_i diagonal:
// r_i I (spherical) or diag(r_i1..r_id) (elliptical), built from the K
// nearest background (y = -1) points of each rare (y = +1) centre.
struct LagoModel {
  LagoVariant variant = LagoVariant::spherical;
  std::size_t k = 5;
  double alpha = 1.0;
  double r_floor = 0.0;
  Matrix centers;  // n1 x d
  Matrix radii;    // n1 x 1 (spherical) or n1 x d (elliptical)

  // Scoring caches; rebuilt by prepare().
  Matrix inv_scale;                // n1 x d: 1 / (alpha r_ij)
  std::vector<double> log_weight;  // log|R_i| - (d/2) log(2 pi) - log|alpha R_i|

  std::size_t dim() const noexcept { return centers.cols(); }
  double radius(std::size_t center, std::size_t coord) const {
    return variant == LagoVariant::spherical ? radii(center, 0) : radii(center, coord);
  }

  void prepare();
  void set_alpha(double a) {
    alpha = a;
    prepare();
  }
};

struct LagoOptions {
  std::size_t k = 5;
  double alpha = 1.0;
  LagoVariant variant = LagoVariant::spherical;
};

// Indices of the K nearest rows of `background` (Euclidean), nearest first,
// equal distances ordered by row index.
std::vector<std::size_t> nearest_rows(std::span<const double> center, const Matrix& background,
                                      std::size_t k);

// Mean Euclidean distance from `center` to its K nearest background rows.
double knn_background_radius(std::span<const double> center, const Matrix& background, std::size_t k);

LagoModel fit_lago(const Dataset& ds, const LagoOptions& options);

double score(const LagoModel& model, std::span<const double> x);
std::vector<double> score(const LagoModel& model, const Matrix& x);

struct Ranking {
  std::vector<std::size_t> order;  // row ids, best first
  std::vector<double> scores;      // per row id
  std::string to_csv() const;      // row_id,score,rank (rank 1 = best)
};

Ranking rank(const LagoModel& model, const Matrix& x_new);

struct AlphaTuning {
  std::vector<double> alphas;
  std::vector<double> mean_ap;              // per alpha, over usable folds
  std::vector<std::vector<double>> fold_ap;  // [fold][alpha]; empty row = skipped fold
  std::vector<std::size_t> skipped_folds;
  double best_alpha = 0.0;

  std::string to_csv() const;  // alpha,mean_ap
};

// Log-spaced 10^-2 .. 10^2.
std::vector<double> default_alpha_grid(std::size_t points = 9);

AlphaTuning tune_alpha(const Dataset& ds, const LagoOptions& base, const std::vector<double>& alphas,
                       std::size_t folds, std::uint64_t seed);

}  // namespace rarekit
