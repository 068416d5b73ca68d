#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rarekit/dataset.hpp"

namespace rarekit {

// Binary classification tree. Internal nodes send x to `left` when
// x[feature] <= threshold. Nodes are stored in preorder; node 0 is the root.
struct DecisionTree {
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    int label = 1;

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  std::vector<Node> nodes;
  std::size_t dim = 0;

  int predict(std::span<const double> x) const;
  std::vector<int> predict(const Matrix& x) const;
  std::size_t depth() const;
  std::size_t leaf_count() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

// Depth-1 tree minimising weighted misclassification over every
// (feature, midpoint threshold, polarity). Ties go to the lowest feature,
// then the lowest threshold, then the stump predicting -1 on the left.
DecisionTree fit_stump(const Dataset& ds, std::span<const double> weights);

struct TreeOptions {
  std::size_t m = 0;          // features drawn per split; 0 means all
  std::size_t max_depth = 0;  // 0 means grow until pure or unsplittable
  std::uint64_t seed = 0;     // node t draws its subset from derive_seed(seed, {t})
};

// Gini-split tree on a row multiset. Weights, when given, are per dataset row.
DecisionTree fit_tree(const Dataset& ds, std::span<const std::size_t> sample, const TreeOptions& options,
                      std::span<const double> weights = {});

struct BoostMember {
  DecisionTree classifier;
  double vote = 0.0;   // a_b = log R_b
  double error = 0.0;  // eps_b
};

enum class BoostStop { completed, perfect_member, weak_learner_failed };

struct BoostOptions {
  std::size_t rounds = 50;
  std::size_t depth = 1;  // 1 = stumps
  std::uint64_t seed = 0;
  bool record_weights = false;
};

struct BoostEnsemble {
  std::vector<BoostMember> members;
  BoostStop stop = BoostStop::completed;
  // weight_history[b] holds the observation weights after round b's update.
  std::vector<std::vector<double>> weight_history;

  double margin(std::span<const double> x) const;
  // sign(sum_b a_b f_b(x)); a zero sum votes +1.
  int predict(std::span<const double> x) const;
  std::vector<int> predict(const Matrix& x) const;
  // errors[b] = test misclassifications of the first b+1 members.
  std::vector<std::size_t> staged_errors(const Dataset& test) const;
};

BoostEnsemble adaboost(const Dataset& ds, const BoostOptions& options);

struct ForestOptions {
  std::size_t trees = 100;
  std::size_t m = 0;  // 0 means all features (bagging)
  std::uint64_t seed = 0;
  bool bootstrap = true;
};

// Tree b uses seed derive_seed(seed, {b}); its bootstrap draws come from
// derive_seed(tree_seed, {0}) and its node subsets from derive_seed(tree_seed, {1}).
struct Forest {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  std::size_t m = 0;
  std::uint64_t seed = 0;

  // Unweighted majority over the first `use` trees (all when 0); ties vote +1.
  int predict(std::span<const double> x, std::size_t use = 0) const;
  std::vector<int> predict(const Matrix& x, std::size_t use = 0) const;
};

Forest random_forest(const Dataset& ds, const ForestOptions& options);
// random_forest with m = d.
Forest bagging(const Dataset& ds, std::size_t trees, std::uint64_t seed);

struct ForestGrid {
  std::vector<std::size_t> ms;
  std::vector<std::size_t> bs;
  Matrix errors;  // errors(mi, bi)

  std::string to_csv() const;  // m,B,errors
};

// One forest of max(bs) trees per m; the B-tree forest is its first B trees,
// which is exactly what an independent B-tree run with the same seed grows.
ForestGrid forest_grid(const Dataset& train, const Dataset& test, const std::vector<std::size_t>& ms,
                       const std::vector<std::size_t>& bs, std::uint64_t seed);

}  // namespace rarekit
