#include "rarekit/kpca.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "rarekit/error.hpp"

namespace rarekit {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

}  // namespace

KpcaModel fit_kpca(const Matrix& features, const KernelSpec& spec, const KpcaOptions& options) {
  spec.validate();
  const std::size_t n = features.rows();
  require(n >= 1, ErrorCode::invalid_argument, "kPCA needs at least one observation");
  require(options.q >= 1 && options.q <= n, ErrorCode::invalid_argument, "kPCA needs 1 <= q <= n");

  const GramMatrix k = gram(spec, features);
  KpcaModel model;
  model.spec = spec;
  model.training_features = features;
  model.centering = CenteringStats::of(k);
  model.requested_q = options.q;
  const auto [kc, unused] = center_gram(k);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view(kc.values));
  require(solver.info() == Eigen::Success, ErrorCode::degenerate, "eigen-decomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();

  const double largest = evals(static_cast<Eigen::Index>(n) - 1);
  const double tol = options.tol_eig > 0.0 ? options.tol_eig : 1e-10 * std::max(largest, 0.0);

  std::vector<Eigen::Index> kept;
  for (Eigen::Index c = static_cast<Eigen::Index>(n) - 1; c >= 0 && kept.size() < options.q; --c) {
    if (evals(c) > tol && evals(c) > 0.0) kept.push_back(c);
  }

  const std::size_t q = kept.size();
  model.alphas = Matrix(n, q);
  model.training_scores = Matrix(n, q);
  for (std::size_t j = 0; j < q; ++j) {
    const double lambda = evals(kept[j]);
    Eigen::VectorXd v = evecs.col(kept[j]);
    Eigen::Index argmax = 0;
    v.cwiseAbs().maxCoeff(&argmax);
    if (v(argmax) < 0.0) v = -v;
    const double scale = 1.0 / std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) {
      model.alphas(i, j) = v(static_cast<Eigen::Index>(i)) * scale;
    }
    model.eigenvalues.push_back(lambda);
  }
  // Training scores through the same path used for new data, so projecting
  // the training rows reproduces them exactly.
  if (q > 0) {
    Eigen::Map<RowMajor> scores(model.training_scores.data(), static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(q));
    scores = view(kc.values) * view(model.alphas);
  }
  return model;
}

KpcaModel fit_kpca(const Dataset& ds, const KernelSpec& spec, const KpcaOptions& options) {
  return fit_kpca(ds.features, spec, options);
}

Matrix project(const KpcaModel& model, const Matrix& x_new) {
  require(x_new.cols() == model.training_features.cols(), ErrorCode::dimension_mismatch,
          "projection data differs in dimension");
  const GramMatrix cross = gram(model.spec, x_new, model.training_features);
  const GramMatrix centered = center_cross_gram(cross, model.centering);
  Matrix out(x_new.rows(), model.q());
  if (model.q() > 0 && x_new.rows() > 0) {
    Eigen::Map<RowMajor> dst(out.data(), static_cast<Eigen::Index>(out.rows()),
                             static_cast<Eigen::Index>(out.cols()));
    dst = view(centered.values) * view(model.alphas);
  }
  return out;
}

}  // namespace rarekit
