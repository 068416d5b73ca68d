#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>

#include "rarekit/matrix.hpp"

namespace rarekit {

enum class KernelKind { linear, gaussian };

// gaussian: K(u, v) = exp(-h * |u - v|^2), with the bandwidth h inside the
// exponent.
struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double h = 1.0;

  static KernelSpec linear() { return {KernelKind::linear, 1.0}; }
  static KernelSpec gaussian(double h) { return {KernelKind::gaussian, h}; }

  void validate() const;
};

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

double kernel_eval(const KernelSpec& spec, std::span<const double> u, std::span<const double> v);

struct GramMatrix {
  Matrix values;
  bool centered = false;
};

// values(i, j) = K(a_i, b_j). Rows are computed in parallel; each entry is
// produced by the same kernel call whatever the worker count.
GramMatrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b);
GramMatrix gram(const KernelSpec& spec, const Matrix& a);

// Statistics of an uncentered self-Gram needed to center it and any cross-Gram
// against the same training points.
struct CenteringStats {
  std::vector<double> column_means;  // (1/n) sum_i K(i, j)
  double grand_mean = 0.0;

  static CenteringStats of(const GramMatrix& self_gram);
};

// Feature-space double centering:
//   K_c  = K  - 1n K - K 1n + 1n K 1n
//   K'_c = K' - 1'n K - K' 1n + 1'n K 1n
// where 1n (n x n) and 1'n (m x n) have every entry equal to 1/n.
std::pair<GramMatrix, std::optional<GramMatrix>> center_gram(
    const GramMatrix& self_gram, const std::optional<GramMatrix>& cross_gram = std::nullopt);

GramMatrix center_cross_gram(const GramMatrix& cross_gram, const CenteringStats& stats);

}  // namespace rarekit
