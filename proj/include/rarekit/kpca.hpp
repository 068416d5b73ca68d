#pragma once

#include <cstddef>
#include <vector>

#include "rarekit/dataset.hpp"
#include "rarekit/kernel.hpp"

namespace rarekit {

// Kernel principal components of the centered Gram matrix. Column j of
// `alphas` holds the expansion coefficients of the j-th component, scaled so
// that eigenvalue_j * |alpha_j|^2 = 1 (unit-length direction in feature
// space). Components are ordered by decreasing eigenvalue and each alpha_j is
// sign-flipped so its largest-magnitude entry is positive.
struct KpcaModel {
  KernelSpec spec;
  Matrix training_features;
  CenteringStats centering;
  Matrix alphas;                     // n x q
  std::vector<double> eigenvalues;   // q, nonincreasing
  Matrix training_scores;            // n x q
  std::size_t requested_q = 0;

  std::size_t q() const noexcept { return eigenvalues.size(); }
  // Fewer components than requested survived the eigenvalue tolerance.
  bool truncated() const noexcept { return q() < requested_q; }
};

struct KpcaOptions {
  std::size_t q = 2;
  // Eigenvalues at or below tol_eig are discarded. A non-positive value
  // selects the relative default 1e-10 * largest eigenvalue.
  double tol_eig = 0.0;
};

KpcaModel fit_kpca(const Matrix& features, const KernelSpec& spec, const KpcaOptions& options);
KpcaModel fit_kpca(const Dataset& ds, const KernelSpec& spec, const KpcaOptions& options);

// Centered cross-Gram times alphas (m x q).
Matrix project(const KpcaModel& model, const Matrix& x_new);

}  // namespace rarekit
