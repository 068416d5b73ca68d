#include "rarekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rarekit/random.hpp"

namespace rarekit {

std::size_t misclassification(std::span<const int> predicted, std::span<const int> truth) {
  require(predicted.size() == truth.size(), ErrorCode::dimension_mismatch,
          "prediction and truth lengths differ");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
  return wrong;
}

std::size_t misclassification(std::span<const int> predicted, std::span<const double> truth) {
  require(predicted.size() == truth.size(), ErrorCode::dimension_mismatch,
          "prediction and truth lengths differ");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != (truth[i] > 0.0 ? 1 : -1);
  return wrong;
}

std::vector<std::size_t> ranking_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

double average_precision(std::span<const double> scores, std::span<const double> truth) {
  require(scores.size() == truth.size(), ErrorCode::dimension_mismatch,
          "score and truth lengths differ");
  const auto order = ranking_order(scores);
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (truth[order[r]] > 0.0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  require(hits > 0, ErrorCode::invalid_argument, "average precision needs at least one positive");
  return sum / static_cast<double>(hits);
}

RankingEval evaluate_ranking(std::span<const double> scores, std::span<const double> truth,
                             std::span<const std::size_t> cutoffs) {
  RankingEval ev;
  ev.average_precision = average_precision(scores, truth);
  const auto order = ranking_order(scores);
  for (std::size_t k : cutoffs) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < std::min(k, order.size()); ++r) hits += truth[order[r]] > 0.0;
    ev.hits_at_k[k] = hits;
  }
  return ev;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, ErrorCode::dimension_mismatch,
          "spearman needs two equal-length samples of size >= 2");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean, db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i)
    if (fold[i] != f) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i)
    if (fold[i] == f) rows.push_back(i);
  return rows;
}

FoldPlan make_fold_plan(std::size_t n, std::size_t k, std::uint64_t seed) {
  require(k >= 2 && k <= n, ErrorCode::invalid_argument, "k-fold needs 2 <= k <= n");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  FoldPlan plan{k, std::vector<std::size_t>(n), seed};
  for (std::size_t pos = 0; pos < n; ++pos) plan.fold[order[pos]] = pos % k;
  return plan;
}

}  // namespace rarekit
