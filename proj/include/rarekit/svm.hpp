#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rarekit/dataset.hpp"
#include "rarekit/kernel.hpp"

namespace rarekit {

// f(x) = beta^T x + beta0 = 0
struct Hyperplane {
  std::vector<double> beta;
  double beta0 = 0.0;
};

double signed_distance(const Hyperplane& h, std::span<const double> x);

enum class Canonicality { canonical, separating_not_canonical, not_separating };

// canonical: min_i y_i f(x_i) >= 1 - 1e-9 and equals 1 within 1e-6.
// separating: min_i y_i f(x_i) > 0.
Canonicality check_canonical(const Hyperplane& h, const Dataset& ds);

// 2 / |beta| for a canonical hyperplane.
double margin(const Hyperplane& h);

// sum_i max(0, 1 - y_i f_i) + lambda * beta_norm_sq
double hinge_objective(std::span<const double> labels, std::span<const double> f_values,
                       double beta_norm_sq, double lambda);

// Penalty weight of the hinge form from the cost parameter gamma of the
// slack formulation.
inline double lambda_from_gamma(double gamma) { return 1.0 / (2.0 * gamma); }

// dual_coordinate: coordinate descent on the box-constrained dual for the
// current offset (0 <= alpha_i <= 1/(2 lambda)).
// subgradient: projected stochastic subgradient with step 1/(lambda' t) and
// last-epoch averaging; converges slowly for small lambda.
enum class HingeSolver { dual_coordinate, subgradient };

std::string to_string(HingeSolver solver);
HingeSolver parse_hinge_solver(std::string_view name);

struct HingeOptions {
  double lambda = 1e-3;
  HingeSolver solver = HingeSolver::dual_coordinate;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
  // Visit order per epoch. When empty, epoch e visits a uniform permutation
  // drawn from derive_seed(seed, {e}).
  std::vector<std::vector<std::size_t>> schedule;
};

// Decision function in kernel-expansion form:
//   f(x) = sum_i alpha_i y_i K(x, x_i) + beta0
struct KernelClassifier {
  KernelSpec spec;
  Matrix training_features;
  std::vector<double> labels;
  std::vector<double> alphas;
  double beta0 = 0.0;
  double lambda = 0.0;
  // Best objective seen so far, recorded before training and after every epoch.
  std::vector<double> objective_history;

  double decision(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : -1; }
  std::vector<double> decision(const Matrix& x) const;
  std::vector<int> predict(const Matrix& x) const;
};

// Fit on a precomputed training self-Gram. Exposed so grids can reuse one
// Gram matrix across penalty values.
struct HingeFit {
  std::vector<double> alphas;
  double beta0 = 0.0;
  double objective = 0.0;
  std::vector<double> objective_history;
};

HingeFit fit_hinge_on_gram(const Matrix& gram_values, std::span<const double> labels,
                           const HingeOptions& options);

// Exact minimiser over the unpenalised offset b of sum_i max(0, 1 - y_i (s_i + b)):
// the midpoint of the flat bottom of this convex piecewise-linear function.
double optimal_offset(std::span<const double> scores, std::span<const double> labels);

// Minimises the hinge + ridge objective over the kernel-expansion
// coefficients with the chosen solver. The offset is refit exactly after each
// epoch and the best model seen (by objective) is kept.
KernelClassifier train_kernel_hinge(const Dataset& ds, const KernelSpec& spec,
                                    const HingeOptions& options);

struct SensitivityGrid {
  std::vector<double> gammas;
  std::vector<double> hs;
  // errors(g, k): test misclassifications for gammas[g], hs[k].
  Matrix errors;

  // Long format with header gamma,h,errors.
  std::string to_csv() const;
};

SensitivityGrid sensitivity_grid(const Dataset& train, const Dataset& test,
                                 const std::vector<double>& gammas, const std::vector<double>& hs,
                                 std::size_t epochs, std::uint64_t seed);

}  // namespace rarekit
