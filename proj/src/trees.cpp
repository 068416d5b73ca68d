#include "rarekit/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/parallel.hpp"
#include "rarekit/random.hpp"

namespace rarekit {

namespace {

void require_labels(const Dataset& ds) {
  require(ds.kind == ResponseKind::class_label, ErrorCode::invalid_argument,
          "tree learners need class labels");
}

// Midpoint that still separates lo from hi when they are adjacent doubles.
double midpoint(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return mid < hi ? mid : lo;
}

DecisionTree leaf_tree(std::size_t dim, int label) {
  DecisionTree t;
  t.dim = dim;
  t.nodes.push_back({-1, 0.0, 0, 0, label});
  return t;
}

struct Grower {
  const Dataset& ds;
  std::span<const double> weights;
  const TreeOptions& options;
  DecisionTree tree;

  double weight(std::size_t row) const { return weights.empty() ? 1.0 : weights[row]; }

  std::vector<std::size_t> candidate_features(std::uint32_t node_id) const {
    const std::size_t d = ds.d();
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t m = options.m == 0 ? d : options.m;
    if (m >= d) return order;
    // First m entries of a partial Fisher-Yates shuffle are the drawn subset;
    // they are scanned in index order, the rest serve as fallback in drawn order.
    Rng rng(derive_seed(options.seed, {node_id}));
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(d - i));
      std::swap(order[i], order[j]);
    }
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
    return order;
  }

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
  };

  // Best Gini split on one feature; impurity is the weight-summed child Gini.
  void scan_feature(std::size_t f, std::vector<std::size_t>& rows, double total, Split& best) const {
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return ds.features(a, f) < ds.features(b, f);
    });
    double total_pos = 0.0;
    for (std::size_t r : rows)
      if (ds.response[r] > 0.0) total_pos += weight(r);
    double left_w = 0.0, left_pos = 0.0;
    const double tol = 1e-12 * total;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      const double w = weight(rows[k]);
      left_w += w;
      if (ds.response[rows[k]] > 0.0) left_pos += w;
      const double v = ds.features(rows[k], f), next = ds.features(rows[k + 1], f);
      if (!(v < next)) continue;
      const double right_w = total - left_w, right_pos = total_pos - left_pos;
      auto gini = [](double w_all, double w_pos) {
        if (w_all <= 0.0) return 0.0;
        const double p = w_pos / w_all;
        return w_all * 2.0 * p * (1.0 - p);
      };
      const double imp = gini(left_w, left_pos) + gini(right_w, right_pos);
      if (imp < best.impurity - tol) {
        best = {static_cast<int>(f), midpoint(v, next), imp};
      }
    }
  }

  void grow(std::vector<std::size_t> rows, std::size_t depth) {
    const auto node_id = static_cast<std::uint32_t>(tree.nodes.size());
    tree.nodes.push_back({});
    double pos = 0.0, neg = 0.0;
    bool has_pos = false, has_neg = false;
    for (std::size_t r : rows) {
      if (ds.response[r] > 0.0) {
        pos += weight(r);
        has_pos = true;
      } else {
        neg += weight(r);
        has_neg = true;
      }
    }
    tree.nodes[node_id].label = pos >= neg ? 1 : -1;
    if (!has_pos || !has_neg) return;
    if (options.max_depth != 0 && depth >= options.max_depth) return;

    const auto features = candidate_features(node_id);
    const std::size_t m = options.m == 0 ? ds.d() : std::min(options.m, ds.d());
    const double total = pos + neg;
    Split best;
    std::vector<std::size_t> scratch = rows;
    for (std::size_t k = 0; k < m; ++k) scan_feature(features[k], scratch, total, best);
    // No splittable feature in the drawn subset: keep drawing until one is.
    for (std::size_t k = m; k < features.size() && best.feature < 0; ++k) {
      scan_feature(features[k], scratch, total, best);
    }
    if (best.feature < 0) return;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (ds.features(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    tree.nodes[node_id].feature = best.feature;
    tree.nodes[node_id].threshold = best.threshold;
    tree.nodes[node_id].left = static_cast<std::uint32_t>(tree.nodes.size());
    grow(std::move(left), depth + 1);
    tree.nodes[node_id].right = static_cast<std::uint32_t>(tree.nodes.size());
    grow(std::move(right), depth + 1);
  }
};

}  // namespace

int DecisionTree::predict(std::span<const double> x) const {
  require(x.size() == dim, ErrorCode::dimension_mismatch, "tree query differs in dimension");
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const Node& n = nodes[at];
    at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[at].label;
}

std::vector<int> DecisionTree::predict(const Matrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
  return out;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[nodes[i].left] = level[i] + 1;
      level[nodes[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.is_leaf(); }));
}

DecisionTree fit_stump(const Dataset& ds, std::span<const double> weights) {
  require_labels(ds);
  require(weights.size() == ds.n(), ErrorCode::dimension_mismatch, "one weight per row required");
  double total = 0.0, total_pos = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    require(weights[i] >= 0.0 && std::isfinite(weights[i]), ErrorCode::invalid_argument,
            "weights must be finite and nonnegative");
    total += weights[i];
    if (ds.response[i] > 0.0) total_pos += weights[i];
  }
  require(total > 0.0, ErrorCode::invalid_argument, "weights sum to zero");
  const double total_neg = total - total_pos;
  const double tol = 1e-12 * total;

  int best_feature = -1;
  double best_threshold = 0.0, best_error = std::numeric_limits<double>::infinity();
  int best_left = -1;
  std::vector<std::size_t> rows(ds.n());
  for (std::size_t f = 0; f < ds.d(); ++f) {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return ds.features(a, f) < ds.features(b, f);
    });
    double left_pos = 0.0, left_neg = 0.0;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      const std::size_t r = rows[k];
      (ds.response[r] > 0.0 ? left_pos : left_neg) += weights[r];
      const double v = ds.features(r, f), next = ds.features(rows[k + 1], f);
      if (!(v < next)) continue;
      // -1 on the left: wrong are left positives and right negatives.
      const double err_minus = left_pos + (total_neg - left_neg);
      const double err_plus = left_neg + (total_pos - left_pos);
      if (err_minus < best_error - tol) {
        best_error = err_minus;
        best_feature = static_cast<int>(f);
        best_threshold = midpoint(v, next);
        best_left = -1;
      }
      if (err_plus < best_error - tol) {
        best_error = err_plus;
        best_feature = static_cast<int>(f);
        best_threshold = midpoint(v, next);
        best_left = 1;
      }
    }
  }
  if (best_feature < 0) return leaf_tree(ds.d(), total_pos >= total_neg ? 1 : -1);

  DecisionTree t;
  t.dim = ds.d();
  t.nodes.push_back({best_feature, best_threshold, 1, 2, best_left});
  t.nodes.push_back({-1, 0.0, 0, 0, best_left});
  t.nodes.push_back({-1, 0.0, 0, 0, -best_left});
  return t;
}

DecisionTree fit_tree(const Dataset& ds, std::span<const std::size_t> sample, const TreeOptions& options,
                      std::span<const double> weights) {
  require_labels(ds);
  require(!sample.empty(), ErrorCode::invalid_argument, "tree needs a nonempty sample");
  require(options.m <= ds.d(), ErrorCode::invalid_argument, "m must not exceed d");
  require(weights.empty() || weights.size() == ds.n(), ErrorCode::dimension_mismatch,
          "one weight per row required");
  for (std::size_t r : sample) require(r < ds.n(), ErrorCode::invalid_argument, "sample row out of range");
  Grower g{ds, weights, options, {}};
  g.tree.dim = ds.d();
  g.grow(std::vector<std::size_t>(sample.begin(), sample.end()), 0);
  return std::move(g.tree);
}

double BoostEnsemble::margin(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& m : members) s += m.vote * m.classifier.predict(x);
  return s;
}

int BoostEnsemble::predict(std::span<const double> x) const { return margin(x) >= 0.0 ? 1 : -1; }

std::vector<int> BoostEnsemble::predict(const Matrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
  return out;
}

std::vector<std::size_t> BoostEnsemble::staged_errors(const Dataset& test) const {
  std::vector<double> sums(test.n(), 0.0);
  std::vector<std::size_t> out;
  for (const auto& m : members) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.n(); ++i) {
      sums[i] += m.vote * m.classifier.predict(test.features.row(i));
      wrong += (sums[i] >= 0.0 ? 1 : -1) != test.label(i);
    }
    out.push_back(wrong);
  }
  return out;
}

BoostEnsemble adaboost(const Dataset& ds, const BoostOptions& options) {
  require_labels(ds);
  require(options.rounds >= 1, ErrorCode::invalid_argument, "boosting needs at least one round");
  const std::size_t n = ds.n();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});

  BoostEnsemble ens;
  for (std::size_t b = 0; b < options.rounds; ++b) {
    DecisionTree f;
    if (options.depth <= 1) {
      f = fit_stump(ds, w);
    } else {
      TreeOptions topt;
      topt.max_depth = options.depth;
      topt.seed = derive_seed(options.seed, {static_cast<std::uint32_t>(b)});
      f = fit_tree(ds, all, topt, w);
    }
    std::vector<bool> wrong(n);
    double sum_all = 0.0, sum_wrong = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      wrong[i] = f.predict(ds.features.row(i)) != ds.label(i);
      sum_all += w[i];
      if (wrong[i]) sum_wrong += w[i];
    }
    const double eps = sum_wrong / sum_all;
    if (eps >= 0.5) {
      require(b > 0, ErrorCode::degenerate, "base learner is no better than chance in round 1");
      ens.stop = BoostStop::weak_learner_failed;
      break;
    }
    if (eps == 0.0) {
      // log R diverges; cap it at the ratio for the smallest resolvable error.
      const double eps_min = 1.0 / (2.0 * static_cast<double>(n));
      ens.members.push_back({std::move(f), std::log((1.0 - eps_min) / eps_min), 0.0});
      if (options.record_weights) ens.weight_history.push_back(w);
      ens.stop = BoostStop::perfect_member;
      break;
    }
    const double ratio = (1.0 - eps) / eps;
    for (std::size_t i = 0; i < n; ++i)
      if (wrong[i]) w[i] *= ratio;
    ens.members.push_back({std::move(f), std::log(ratio), eps});
    if (options.record_weights) ens.weight_history.push_back(w);
  }
  return ens;
}

int Forest::predict(std::span<const double> x, std::size_t use) const {
  const std::size_t count = use == 0 ? trees.size() : std::min(use, trees.size());
  long votes = 0;
  for (std::size_t b = 0; b < count; ++b) votes += trees[b].predict(x);
  return votes >= 0 ? 1 : -1;
}

std::vector<int> Forest::predict(const Matrix& x, std::size_t use) const {
  std::vector<int> out(x.rows());
  parallel_for(x.rows(), [&](std::size_t i) { out[i] = predict(x.row(i), use); });
  return out;
}

Forest random_forest(const Dataset& ds, const ForestOptions& options) {
  require_labels(ds);
  require(options.trees >= 1, ErrorCode::invalid_argument, "forest needs at least one tree");
  const std::size_t m = options.m == 0 ? ds.d() : options.m;
  require(m >= 1 && m <= ds.d(), ErrorCode::invalid_argument, "m must lie in [1, d]");
  const std::size_t n = ds.n();

  Forest forest;
  forest.m = m;
  forest.seed = options.seed;
  forest.trees.resize(options.trees);
  forest.tree_seeds.resize(options.trees);
  parallel_for(options.trees, [&](std::size_t b) {
    const std::uint64_t tree_seed = derive_seed(options.seed, {static_cast<std::uint32_t>(b)});
    std::vector<std::size_t> sample(n);
    if (options.bootstrap) {
      Rng rng(derive_seed(tree_seed, {0}));
      for (auto& s : sample) s = static_cast<std::size_t>(rng.uniform_index(n));
    } else {
      std::iota(sample.begin(), sample.end(), std::size_t{0});
    }
    TreeOptions topt;
    topt.m = m;
    topt.seed = derive_seed(tree_seed, {1});
    forest.trees[b] = fit_tree(ds, sample, topt);
    forest.tree_seeds[b] = tree_seed;
  });
  return forest;
}

Forest bagging(const Dataset& ds, std::size_t trees, std::uint64_t seed) {
  return random_forest(ds, {trees, ds.d(), seed, true});
}

std::string ForestGrid::to_csv() const {
  csv::Writer w({"m", "B", "errors"});
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = 0; j < bs.size(); ++j) w.row(ms[i], bs[j], errors(i, j));
  return w.text();
}

ForestGrid forest_grid(const Dataset& train, const Dataset& test, const std::vector<std::size_t>& ms,
                       const std::vector<std::size_t>& bs, std::uint64_t seed) {
  require(!ms.empty() && !bs.empty(), ErrorCode::invalid_argument, "grids must be nonempty");
  for (std::size_t b : bs) require(b >= 1, ErrorCode::invalid_argument, "forest sizes must be >= 1");
  const std::size_t max_b = *std::max_element(bs.begin(), bs.end());
  ForestGrid grid{ms, bs, Matrix(ms.size(), bs.size())};
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const Forest forest = random_forest(train, {max_b, ms[i], seed, true});
    // Per test row, running vote totals over the trees in order.
    std::vector<std::vector<int>> running(test.n());
    parallel_for(test.n(), [&](std::size_t r) {
      running[r].resize(max_b);
      int votes = 0;
      for (std::size_t b = 0; b < max_b; ++b) {
        votes += forest.trees[b].predict(test.features.row(r));
        running[r][b] = votes;
      }
    });
    for (std::size_t j = 0; j < bs.size(); ++j) {
      double wrong = 0.0;
      for (std::size_t r = 0; r < test.n(); ++r) {
        const int pred = running[r][bs[j] - 1] >= 0 ? 1 : -1;
        wrong += pred != test.label(r);
      }
      grid.errors(i, j) = wrong;
    }
  }
  return grid;
}

}  // namespace rarekit
