#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rarekit/dataset.hpp"
#include "rarekit/error.hpp"
#include "rarekit/parallel.hpp"

namespace rarekit {

std::size_t misclassification(std::span<const int> predicted, std::span<const int> truth);
std::size_t misclassification(std::span<const int> predicted, std::span<const double> truth);

// Row indices ordered by descending score; equal scores keep row order.
std::vector<std::size_t> ranking_order(std::span<const double> scores);

// Mean over positives (truth > 0) of the precision at each positive's rank.
double average_precision(std::span<const double> scores, std::span<const double> truth);

struct RankingEval {
  double average_precision = 0.0;
  std::map<std::size_t, std::size_t> hits_at_k;  // cutoff -> positives in the top k
};

RankingEval evaluate_ranking(std::span<const double> scores, std::span<const double> truth,
                             std::span<const std::size_t> cutoffs);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

// fold[i] in [0, k): fold sizes differ by at most one.
struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> fold;
  std::uint64_t seed = 0;

  std::vector<std::size_t> train_rows(std::size_t f) const;
  std::vector<std::size_t> test_rows(std::size_t f) const;
};

FoldPlan make_fold_plan(std::size_t n, std::size_t k, std::uint64_t seed);

struct KfoldResult {
  std::vector<double> per_fold;
  double mean = 0.0;
};

// Trainer: (const Dataset& train, std::size_t fold) -> Model
// Evaluator: (const Model&, const Dataset& test, std::size_t fold) -> double
// Folds run concurrently; a fold the trainer rejects is re-raised with its
// index attached.
template <typename Trainer, typename Evaluator>
KfoldResult kfold(const Dataset& ds, const FoldPlan& plan, Trainer&& trainer, Evaluator&& evaluator) {
  require(plan.k >= 2 && plan.fold.size() == ds.n(), ErrorCode::invalid_argument,
          "fold plan does not match the dataset");
  KfoldResult out;
  out.per_fold.assign(plan.k, 0.0);
  parallel_for(plan.k, [&](std::size_t f) {
    const auto train_idx = plan.train_rows(f);
    const auto test_idx = plan.test_rows(f);
    const Dataset train = ds.subset(train_idx);
    const Dataset test = ds.subset(test_idx);
    try {
      const auto model = trainer(train, f);
      out.per_fold[f] = evaluator(model, test, f);
    } catch (const Error& e) {
      throw Error(e.code(), "fold " + std::to_string(f) + ": " + e.what());
    }
  });
  double total = 0.0;
  for (double v : out.per_fold) total += v;
  out.mean = total / static_cast<double>(plan.k);
  return out;
}

}  // namespace rarekit
