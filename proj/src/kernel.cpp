#include "rarekit/kernel.hpp"

#include <cmath>

#include "rarekit/error.hpp"
#include "rarekit/parallel.hpp"
#include "rarekit/simd.hpp"

namespace rarekit {

void KernelSpec::validate() const {
  if (kind == KernelKind::gaussian) {
    require(std::isfinite(h) && h > 0.0, ErrorCode::invalid_argument,
            "gaussian kernel needs h > 0");
  }
}

std::string to_string(KernelKind kind) {
  return kind == KernelKind::linear ? "linear" : "gaussian";
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "gaussian" || name == "gaussian_h" || name == "rbf") return KernelKind::gaussian;
  throw Error(ErrorCode::invalid_argument, "unknown kernel kind: " + name);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> u, std::span<const double> v) {
  require(u.size() == v.size(), ErrorCode::dimension_mismatch, "kernel arguments differ in dimension");
  if (spec.kind == KernelKind::linear) return simd::dot(u, v);
  return std::exp(-spec.h * simd::squared_distance(u, v));
}

GramMatrix gram(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
  spec.validate();
  require(a.cols() == b.cols(), ErrorCode::dimension_mismatch, "Gram operands differ in dimension");
  GramMatrix out{Matrix(a.rows(), b.rows()), false};
  parallel_for(a.rows(), [&](std::size_t i) {
    auto ai = a.row(i);
    auto dst = out.values.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) dst[j] = kernel_eval(spec, ai, b.row(j));
  });
  return out;
}

GramMatrix gram(const KernelSpec& spec, const Matrix& a) {
  // kernel_eval is symmetric bit for bit (both kernels are symmetric in their
  // per-lane operations), so filling the lower triangle by mirroring matches
  // the full computation exactly.
  spec.validate();
  const std::size_t n = a.rows();
  GramMatrix out{Matrix(n, n), false};
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) out.values(i, j) = kernel_eval(spec, a.row(i), a.row(j));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) out.values(i, j) = out.values(j, i);
  return out;
}

CenteringStats CenteringStats::of(const GramMatrix& self_gram) {
  const Matrix& k = self_gram.values;
  require(k.rows() == k.cols() && k.rows() > 0, ErrorCode::dimension_mismatch,
          "self-Gram must be square and non-empty");
  const std::size_t n = k.rows();
  CenteringStats s;
  s.column_means.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s.column_means[j] += k(i, j);
  double total = 0.0;
  for (double& c : s.column_means) {
    c /= static_cast<double>(n);
    total += c;
  }
  s.grand_mean = total / static_cast<double>(n);
  return s;
}

GramMatrix center_cross_gram(const GramMatrix& cross_gram, const CenteringStats& stats) {
  require(!cross_gram.centered, ErrorCode::invalid_argument, "cross-Gram is already centered");
  const Matrix& kp = cross_gram.values;
  const std::size_t n = stats.column_means.size();
  require(kp.cols() == n, ErrorCode::dimension_mismatch, "cross-Gram width differs from training size");
  GramMatrix out{Matrix(kp.rows(), n), true};
  for (std::size_t a = 0; a < kp.rows(); ++a) {
    double row_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) row_mean += kp(a, i);
    row_mean /= static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      out.values(a, j) = kp(a, j) - stats.column_means[j] - row_mean + stats.grand_mean;
    }
  }
  return out;
}

std::pair<GramMatrix, std::optional<GramMatrix>> center_gram(
    const GramMatrix& self_gram, const std::optional<GramMatrix>& cross_gram) {
  require(!self_gram.centered, ErrorCode::invalid_argument, "Gram matrix is already centered");
  const auto stats = CenteringStats::of(self_gram);
  const Matrix& k = self_gram.values;
  const std::size_t n = k.rows();
  // For a symmetric K the row means equal the column means.
  GramMatrix centered{Matrix(n, n), true};
  for (std::size_t i = 0; i < n; ++i) {
    double row_mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_mean += k(i, j);
    row_mean /= static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      centered.values(i, j) = k(i, j) - stats.column_means[j] - row_mean + stats.grand_mean;
    }
  }
  std::optional<GramMatrix> cross;
  if (cross_gram) cross = center_cross_gram(*cross_gram, stats);
  return {std::move(centered), std::move(cross)};
}

}  // namespace rarekit
