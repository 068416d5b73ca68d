#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "rarekit/experiments.hpp"
#include "rarekit/kpca.hpp"
#include "rarekit/metrics.hpp"
#include "support.hpp"

using namespace rarekit;

namespace {

Eigen::MatrixXd centered(const Matrix& m) {
  Eigen::MatrixXd x(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) x(i, j) = m(i, j);
  return x.rowwise() - x.colwise().mean();
}

// Classical PCA: eigenvectors of S = Xc^T Xc, scores Xc v, largest first.
struct Pca {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd scores;
};

Pca classical_pca(const Matrix& m) {
  const Eigen::MatrixXd xc = centered(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xc.transpose() * xc);
  const Eigen::Index d = xc.cols();
  Pca out{Eigen::VectorXd(d), Eigen::MatrixXd(xc.rows(), d)};
  for (Eigen::Index j = 0; j < d; ++j) {
    out.eigenvalues(j) = es.eigenvalues()(d - 1 - j);
    out.scores.col(j) = xc * es.eigenvectors().col(d - 1 - j);
  }
  return out;
}

}  // namespace

TEST_CASE("linear kPCA reproduces classical PCA up to sign") {
  Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 8 + rng.uniform_index(30);
    const std::size_t d = 2 + rng.uniform_index(4);
    Matrix x = test::random_matrix(n, d, rng);
    for (std::size_t i = 0; i < n; ++i) x(i, 0) *= 3.0;  // separate the leading eigenvalue
    const KpcaModel model = fit_kpca(x, KernelSpec::linear(), {d, 0.0});
    const Pca oracle = classical_pca(x);
    REQUIRE(model.q() == d);
    for (std::size_t j = 0; j < d; ++j) {
      CHECK(model.eigenvalues[j] == doctest::Approx(oracle.eigenvalues(j)).epsilon(1e-9));
      const double sign = model.training_scores(0, j) * oracle.scores(0, j) >= 0.0 ? 1.0 : -1.0;
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(model.training_scores(i, j) - sign * oracle.scores(i, j)));
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("kPCA invariants") {
  Rng rng(5);
  const Matrix x = test::random_matrix(30, 3, rng);
  const KpcaModel model = fit_kpca(x, KernelSpec::gaussian(0.5), {5, 0.0});
  REQUIRE(model.q() == 5);
  const Matrix kc = center_gram(gram(model.spec, x)).first.values;
  const double top = model.eigenvalues.front();
  for (std::size_t j = 0; j < model.q(); ++j) {
    if (j > 0) CHECK(model.eigenvalues[j] <= model.eigenvalues[j - 1]);
    double norm = 0.0, residual = 0.0;
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      norm += model.alphas(i, j) * model.alphas(i, j);
      if (std::abs(model.alphas(i, j)) > std::abs(model.alphas(argmax, j))) argmax = i;
      double kv = 0.0;
      for (std::size_t l = 0; l < x.rows(); ++l) kv += kc(i, l) * model.alphas(l, j);
      residual += std::pow(kv - model.eigenvalues[j] * model.alphas(i, j), 2);
    }
    CHECK(model.eigenvalues[j] * norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::sqrt(residual) <= 1e-8 * top);
    CHECK(model.alphas(argmax, j) > 0.0);
    for (std::size_t k = 0; k < j; ++k) {
      double cross = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t l = 0; l < x.rows(); ++l) cross += model.alphas(i, k) * kc(i, l) * model.alphas(l, j);
      CHECK(std::abs(cross) <= 1e-8 * top);
    }
  }
}

TEST_CASE("two points symmetric about the origin keep one component") {
  const Matrix x = Matrix::from_rows({{1.0, 2.0}, {-1.0, -2.0}});
  const KpcaModel model = fit_kpca(x, KernelSpec::linear(), {2, 0.0});
  CHECK(model.q() == 1);
  CHECK(model.truncated());
  CHECK(model.eigenvalues[0] == doctest::Approx(10.0));
}

TEST_CASE("duplicate rows report fewer components than requested") {
  const Matrix x = Matrix::from_rows({{0, 0}, {1, 1}, {0, 0}, {1, 1}});
  const KpcaModel model = fit_kpca(x, KernelSpec::gaussian(1.0), {3, 0.0});
  CHECK(model.q() == 1);
  CHECK(model.requested_q == 3);
  CHECK(model.truncated());
}

TEST_CASE("projection") {
  Rng rng(9);
  const Matrix x = test::random_matrix(20, 3, rng);
  const Matrix q = test::random_matrix(7, 3, rng);

  SUBCASE("training rows reproduce training scores") {
    const KpcaModel model = fit_kpca(x, KernelSpec::gaussian(0.8), {3, 0.0});
    CHECK(project(model, x) == model.training_scores);
  }
  SUBCASE("linear kernel projection is a dot product with u_j = Xc^T alpha_j") {
    const KpcaModel model = fit_kpca(x, KernelSpec::linear(), {2, 0.0});
    const Eigen::MatrixXd xc = centered(x);
    Eigen::MatrixXd alphas(x.rows(), 2);
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < 2; ++j) alphas(i, j) = model.alphas(i, j);
    const Eigen::MatrixXd u = xc.transpose() * alphas;
    CHECK(u.col(0).norm() == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::MatrixXd qe(q.rows(), q.cols());
    Eigen::RowVectorXd mean(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, j);
      mean(j) = s / static_cast<double>(x.rows());
    }
    for (std::size_t i = 0; i < q.rows(); ++i)
      for (std::size_t j = 0; j < q.cols(); ++j) qe(i, j) = q(i, j) - mean(j);
    const Eigen::MatrixXd expected = qe * u;
    const Matrix got = project(model, q);
    for (std::size_t i = 0; i < q.rows(); ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(got(i, j) == doctest::Approx(expected(i, j)).epsilon(1e-9));
  }
  SUBCASE("wrong width is rejected") {
    const KpcaModel model = fit_kpca(x, KernelSpec::linear(), {1, 0.0});
    CHECK_THROWS_AS(project(model, Matrix(2, 5)), Error);
  }
}

TEST_CASE("first gaussian component orders the spherical toy by radius") {
  const auto toy = experiments::kpca_toy(200, 3.0, 1.0, 1);
  CHECK(std::abs(toy.spearman_first) >= 0.9);
}

TEST_CASE("fit_kpca argument checks") {
  CHECK_THROWS_AS(fit_kpca(Matrix(3, 2), KernelSpec::linear(), {0, 0.0}), Error);
  CHECK_THROWS_AS(fit_kpca(Matrix(3, 2), KernelSpec::linear(), {4, 0.0}), Error);
}
