#include "rarekit/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/parallel.hpp"
#include "rarekit/random.hpp"
#include "rarekit/simd.hpp"

namespace rarekit {

namespace {

double norm(std::span<const double> v) { return std::sqrt(simd::dot(v, v)); }

void require_binary(std::span<const double> labels) {
  for (double y : labels) {
    require(y == 1.0 || y == -1.0, ErrorCode::invalid_argument, "labels must be -1 or +1");
  }
}

// s = K c, penalty = c^T K c
struct Evaluation {
  std::vector<double> scores;
  double penalty = 0.0;
};

Evaluation evaluate(const Matrix& k, std::span<const double> coef) {
  Evaluation ev;
  ev.scores.resize(k.rows());
  for (std::size_t i = 0; i < k.rows(); ++i) ev.scores[i] = simd::dot(k.row(i), coef);
  ev.penalty = simd::dot(coef, ev.scores);
  return ev;
}

struct Candidate {
  std::vector<double> coef;  // alpha_i y_i
  double beta0 = 0.0;
  double objective = std::numeric_limits<double>::infinity();
};

Candidate score_candidate(const Matrix& k, std::span<const double> labels,
                          std::vector<double> coef, double lambda) {
  Candidate c;
  const auto ev = evaluate(k, coef);
  c.beta0 = optimal_offset(ev.scores, labels);
  std::vector<double> f(ev.scores);
  for (double& v : f) v += c.beta0;
  c.objective = hinge_objective(labels, f, ev.penalty, lambda);
  c.coef = std::move(coef);
  return c;
}

}  // namespace

double signed_distance(const Hyperplane& h, std::span<const double> x) {
  const double len = norm(h.beta);
  require(len > 0.0, ErrorCode::invalid_argument, "hyperplane has zero normal vector");
  return (simd::dot(h.beta, x) + h.beta0) / len;
}

Canonicality check_canonical(const Hyperplane& h, const Dataset& ds) {
  require(ds.kind == ResponseKind::class_label, ErrorCode::invalid_argument,
          "canonicality needs class labels");
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ds.n(); ++i) {
    lowest = std::min(lowest, ds.response[i] * (simd::dot(h.beta, ds.features.row(i)) + h.beta0));
  }
  if (lowest >= 1.0 - 1e-9 && std::abs(lowest - 1.0) <= 1e-6) return Canonicality::canonical;
  if (lowest > 0.0) return Canonicality::separating_not_canonical;
  return Canonicality::not_separating;
}

double margin(const Hyperplane& h) {
  const double len = norm(h.beta);
  require(len > 0.0, ErrorCode::invalid_argument, "hyperplane has zero normal vector");
  return 2.0 / len;
}

double hinge_objective(std::span<const double> labels, std::span<const double> f_values,
                       double beta_norm_sq, double lambda) {
  require(labels.size() == f_values.size(), ErrorCode::dimension_mismatch,
          "labels and decision values differ in length");
  require(lambda >= 0.0, ErrorCode::invalid_argument, "lambda must be nonnegative");
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    loss += std::max(0.0, 1.0 - labels[i] * f_values[i]);
  }
  return loss + lambda * beta_norm_sq;
}

double optimal_offset(std::span<const double> scores, std::span<const double> labels) {
  // Term i has its kink at b_i = y_i - s_i. The slope left of every kink is
  // -P (P = number of positives) and rises by one at each kink, so the flat
  // bottom lies between the P-th and (P+1)-th smallest kinks.
  const std::size_t n = scores.size();
  require(n == labels.size() && n > 0, ErrorCode::dimension_mismatch, "offset fit needs matching data");
  std::vector<double> kinks(n);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    kinks[i] = labels[i] - scores[i];
    if (labels[i] > 0.0) ++positives;
  }
  std::sort(kinks.begin(), kinks.end());
  if (positives == 0) return kinks.front();
  if (positives == n) return kinks.back();
  return 0.5 * (kinks[positives - 1] + kinks[positives]);
}

std::string to_string(HingeSolver solver) {
  return solver == HingeSolver::dual_coordinate ? "dual" : "subgradient";
}

HingeSolver parse_hinge_solver(std::string_view name) {
  if (name == "dual" || name == "dual_coordinate") return HingeSolver::dual_coordinate;
  if (name == "subgradient" || name == "sgd") return HingeSolver::subgradient;
  throw Error(ErrorCode::invalid_argument, "unknown solver: " + std::string(name));
}

namespace {

// Coordinate descent on  1/2 a^T Q a - sum_i m_i a_i,  0 <= a_i <= c,  with
// Q_ij = y_i y_j K_ij and margins m_i = 1 - y_i b for the current offset b.
class DualSolver {
 public:
  DualSolver(const Matrix& k, std::span<const double> labels, double lambda)
      : k_(k), labels_(labels), cap_(1.0 / (2.0 * lambda)), alpha_(labels.size(), 0.0),
        scores_(labels.size(), 0.0) {}

  void epoch(std::span<const std::size_t> order, double offset, bool /*last*/) {
    const std::size_t n = labels_.size();
    for (std::size_t i : order) {
      const double kii = k_(i, i);
      if (kii <= 0.0) continue;
      const double grad = labels_[i] * (scores_[i] + offset) - 1.0;
      const double updated = std::clamp(alpha_[i] - grad / kii, 0.0, cap_);
      const double delta = updated - alpha_[i];
      if (delta == 0.0) continue;
      alpha_[i] = updated;
      const double step = delta * labels_[i];
      const auto row = k_.row(i);
      for (std::size_t j = 0; j < n; ++j) scores_[j] += step * row[j];
    }
  }

  std::vector<double> coefficients() const {
    std::vector<double> c(alpha_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = alpha_[i] * labels_[i];
    return c;
  }

  std::optional<std::vector<double>> averaged() const { return std::nullopt; }

 private:
  const Matrix& k_;
  std::span<const double> labels_;
  double cap_;
  std::vector<double> alpha_;
  std::vector<double> scores_;  // K (alpha * y)
};

// Pegasos on the averaged form (1/n) sum hinge + (lambda'/2) |beta|^2, which has
// the same minimiser when lambda' = 2 lambda / n. The iterate is
// scale * sum_j u_j phi(x_j); gram_norm tracks u^T K u so the projection onto
// |beta| <= 1/sqrt(lambda') is O(1) per step.
class SubgradientSolver {
 public:
  SubgradientSolver(const Matrix& k, std::span<const double> labels, double lambda)
      : k_(k), labels_(labels), lambda_sgd_(2.0 * lambda / static_cast<double>(labels.size())),
        u_(labels.size(), 0.0), sum_(labels.size(), 0.0) {}

  void epoch(std::span<const std::size_t> order, double offset, bool last) {
    const std::size_t n = labels_.size();
    const double radius_sq = 1.0 / lambda_sgd_;
    if (last) {
      std::fill(sum_.begin(), sum_.end(), 0.0);
      summed_ = order.size();
    }
    for (std::size_t i : order) {
      ++t_;
      const double ku = simd::dot(k_.row(i), u_);
      const double f = scale_ * ku + offset;
      const double step = 1.0 / (lambda_sgd_ * static_cast<double>(t_));
      if (t_ > 1) scale_ *= 1.0 - 1.0 / static_cast<double>(t_);
      if (labels_[i] * f < 1.0) {
        const double delta = labels_[i] * step / scale_;
        gram_norm_ += 2.0 * delta * ku + delta * delta * k_(i, i);
        u_[i] += delta;
      }
      const double norm_sq = scale_ * scale_ * gram_norm_;
      if (norm_sq > radius_sq) scale_ *= std::sqrt(radius_sq / norm_sq);
      if (scale_ < 1e-6) {
        for (double& v : u_) v *= scale_;
        gram_norm_ *= scale_ * scale_;
        scale_ = 1.0;
      }
      if (last) {
        for (std::size_t j = 0; j < n; ++j) sum_[j] += scale_ * u_[j];
      }
    }
  }

  std::vector<double> coefficients() const {
    std::vector<double> c(u_.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = scale_ * u_[j];
    return c;
  }

  std::optional<std::vector<double>> averaged() const {
    if (summed_ == 0) return std::nullopt;
    std::vector<double> c(sum_);
    for (double& v : c) v /= static_cast<double>(summed_);
    return c;
  }

 private:
  const Matrix& k_;
  std::span<const double> labels_;
  double lambda_sgd_;
  std::vector<double> u_;
  std::vector<double> sum_;
  std::size_t summed_ = 0;
  double scale_ = 1.0;
  double gram_norm_ = 0.0;
  std::uint64_t t_ = 0;
};

template <class Solver>
HingeFit run_solver(Solver& solver, const Matrix& k, std::span<const double> labels,
                    const HingeOptions& options) {
  const std::size_t n = labels.size();
  HingeFit fit;
  Candidate best = score_candidate(k, labels, std::vector<double>(n, 0.0), options.lambda);
  double offset = best.beta0;
  fit.objective_history.push_back(best.objective);

  std::vector<std::size_t> order(n);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    if (options.schedule.empty()) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng rng(derive_seed(options.seed, {static_cast<std::uint32_t>(epoch)}));
      rng.shuffle(order);
    } else {
      order = options.schedule[epoch];
      for (std::size_t i : order) {
        require(i < n, ErrorCode::invalid_argument, "schedule index out of range");
      }
    }
    const bool last = epoch + 1 == options.epochs;
    solver.epoch(order, offset, last);

    Candidate current = score_candidate(k, labels, solver.coefficients(), options.lambda);
    offset = current.beta0;
    if (current.objective < best.objective) best = std::move(current);
    if (last) {
      if (auto avg = solver.averaged()) {
        Candidate c = score_candidate(k, labels, std::move(*avg), options.lambda);
        if (c.objective < best.objective) best = std::move(c);
      }
    }
    fit.objective_history.push_back(best.objective);
  }

  fit.alphas.resize(n);
  for (std::size_t i = 0; i < n; ++i) fit.alphas[i] = best.coef[i] * labels[i];
  fit.beta0 = best.beta0;
  fit.objective = best.objective;
  return fit;
}

}  // namespace

HingeFit fit_hinge_on_gram(const Matrix& k, std::span<const double> labels,
                           const HingeOptions& options) {
  const std::size_t n = labels.size();
  require(n >= 1 && k.rows() == n && k.cols() == n, ErrorCode::dimension_mismatch,
          "Gram matrix must be n x n");
  require(options.epochs >= 1, ErrorCode::invalid_argument, "epochs must be >= 1");
  require(options.lambda > 0.0, ErrorCode::invalid_argument, "lambda must be positive");
  require(options.schedule.empty() || options.schedule.size() == options.epochs,
          ErrorCode::invalid_argument, "schedule must list one visit order per epoch");
  require_binary(labels);

  if (options.solver == HingeSolver::subgradient) {
    SubgradientSolver solver(k, labels, options.lambda);
    return run_solver(solver, k, labels, options);
  }
  DualSolver solver(k, labels, options.lambda);
  return run_solver(solver, k, labels, options);
}

KernelClassifier train_kernel_hinge(const Dataset& ds, const KernelSpec& spec,
                                    const HingeOptions& options) {
  require(ds.kind == ResponseKind::class_label, ErrorCode::invalid_argument,
          "kernel classifier needs binary labels");
  require_binary(ds.response);
  const GramMatrix k = gram(spec, ds.features);
  HingeFit fit = fit_hinge_on_gram(k.values, ds.response, options);
  KernelClassifier model;
  model.spec = spec;
  model.training_features = ds.features;
  model.labels = ds.response;
  model.alphas = std::move(fit.alphas);
  model.beta0 = fit.beta0;
  model.lambda = options.lambda;
  model.objective_history = std::move(fit.objective_history);
  return model;
}

double KernelClassifier::decision(std::span<const double> x) const {
  double f = beta0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] != 0.0) f += alphas[i] * labels[i] * kernel_eval(spec, x, training_features.row(i));
  }
  return f;
}

std::vector<double> KernelClassifier::decision(const Matrix& x) const {
  std::vector<double> out(x.rows());
  parallel_for(x.rows(), [&](std::size_t i) { out[i] = decision(x.row(i)); });
  return out;
}

std::vector<int> KernelClassifier::predict(const Matrix& x) const {
  const auto f = decision(x);
  std::vector<int> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] >= 0.0 ? 1 : -1;
  return out;
}

std::string SensitivityGrid::to_csv() const {
  csv::Writer w({"gamma", "h", "errors"});
  for (std::size_t g = 0; g < gammas.size(); ++g)
    for (std::size_t k = 0; k < hs.size(); ++k) w.row(gammas[g], hs[k], errors(g, k));
  return w.text();
}

SensitivityGrid sensitivity_grid(const Dataset& train, const Dataset& test,
                                 const std::vector<double>& gammas, const std::vector<double>& hs,
                                 std::size_t epochs, std::uint64_t seed) {
  require(!gammas.empty() && !hs.empty(), ErrorCode::invalid_argument, "grids must be nonempty");
  require(train.d() == test.d(), ErrorCode::dimension_mismatch, "train/test differ in dimension");
  SensitivityGrid grid{gammas, hs, Matrix(gammas.size(), hs.size())};
  for (std::size_t hk = 0; hk < hs.size(); ++hk) {
    const KernelSpec spec = KernelSpec::gaussian(hs[hk]);
    const GramMatrix k = gram(spec, train.features);
    const GramMatrix cross = gram(spec, test.features, train.features);
    parallel_for(gammas.size(), [&](std::size_t g) {
      HingeOptions opt;
      opt.lambda = lambda_from_gamma(gammas[g]);
      opt.epochs = epochs;
      opt.seed = derive_seed(seed, {static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(hk)});
      const HingeFit fit = fit_hinge_on_gram(k.values, train.response, opt);
      std::vector<double> coef(train.n());
      for (std::size_t i = 0; i < coef.size(); ++i) coef[i] = fit.alphas[i] * train.response[i];
      double errors = 0.0;
      for (std::size_t a = 0; a < test.n(); ++a) {
        const double f = simd::dot(cross.values.row(a), coef) + fit.beta0;
        const int pred = f >= 0.0 ? 1 : -1;
        if (pred != test.label(a)) errors += 1.0;
      }
      grid.errors(g, hk) = errors;
    });
  }
  return grid;
}

}  // namespace rarekit
