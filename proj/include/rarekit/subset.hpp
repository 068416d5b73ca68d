#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rarekit/dataset.hpp"

namespace rarekit {

// Subset of the d candidate predictors. Bit j set means column j is in the
// model. The empty mask is the intercept-only model.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(std::size_t d) : bits_(d, false) {}
  static SubsetMask from_bits(std::uint64_t bits, std::size_t d);
  static SubsetMask from_indices(const std::vector<std::size_t>& idx, std::size_t d);

  std::size_t size() const noexcept { return bits_.size(); }
  std::size_t count() const noexcept;
  bool test(std::size_t j) const { return bits_[j]; }
  void set(std::size_t j, bool on = true) { bits_[j] = on; }
  void flip(std::size_t j) { bits_[j] = !bits_[j]; }

  std::vector<std::size_t> indices() const;
  // Requires size() <= 64.
  std::uint64_t to_bits() const;
  bool contains(const SubsetMask& other) const;
  // 1-based variable numbers, e.g. "{2,5,8}".
  std::string to_string() const;

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
  friend auto operator<=>(const SubsetMask& a, const SubsetMask& b) { return a.bits_ <=> b.bits_; }

 private:
  std::vector<bool> bits_;
};

enum class CriterionKind { aic, bic, custom };

struct CriterionSpec {
  CriterionKind kind = CriterionKind::aic;
  double gamma = 2.0;

  static CriterionSpec aic() { return {CriterionKind::aic, 2.0}; }
  static CriterionSpec bic(std::size_t n);
  static CriterionSpec custom(double gamma);
};

CriterionSpec parse_criterion(const std::string& name, std::size_t n, double custom_gamma = 0.0);

// F = n ln(max(RSS, 1e-12 TSS) / n) + gamma (|mask| + 1) for the least-squares
// fit of the response on an intercept plus the masked columns (column-pivoted
// QR). Rank-deficient designs score +infinity. Lower is better.
double criterion(const Dataset& ds, const SubsetMask& mask, const CriterionSpec& spec);

// Residual sum of squares of the same fit (no floor).
double residual_sum_of_squares(const Dataset& ds, const SubsetMask& mask);

inline constexpr std::size_t kExhaustiveMaxVariables = 20;

struct ExhaustiveResult {
  std::size_t d = 0;
  std::vector<double> scores;  // scores[bits] for every mask
  SubsetMask best;
  double best_score = 0.0;

  // mask,size,F and, when a truth set is given, group (I = contains it).
  std::string to_csv(const SubsetMask* truth = nullptr) const;
};

// All 2^d masks (d <= 20); ties resolved toward the lowest integer mask.
ExhaustiveResult exhaustive_search(const Dataset& ds, const CriterionSpec& spec);

struct GaParams {
  std::size_t population = 50;
  std::size_t tournament = 2;
  double crossover_rate = 0.5;  // per-bit swap probability (uniform crossover)
  double mutation_rate = 0.0;   // per-bit; 0 selects 1/d
  std::size_t elitism = 1;
  double initial_density = 0.5;
  std::vector<SubsetMask> seeded;  // placed first in the initial population
};

struct UniverseResult {
  SubsetMask best_mask;
  double best_score = 0.0;
  std::size_t generations_run = 0;
  std::uint64_t seed = 0;
  // best_history[0] is the best of the initial population, then one entry per
  // generation; the best-ever score, so nonincreasing.
  std::vector<double> best_history;
};

UniverseResult evolve(const Dataset& ds, const CriterionSpec& spec, const GaParams& ga,
                      std::size_t generations, std::uint64_t seed);

struct VoteTally {
  std::vector<std::size_t> frequencies;
  std::size_t universes = 0;
  double tau = 0.5;
  SubsetMask selected;

  // variable,frequency,selected
  std::string to_csv(const std::vector<std::string>& names) const;
};

// selected_j <=> frequency_j >= ceil(tau * B)
VoteTally tally_votes(const std::vector<SubsetMask>& masks, std::size_t d, double tau);

struct UniversesResult {
  VoteTally tally;
  std::vector<UniverseResult> universes;
};

// Universe u evolves with seed derive_seed(master_seed, {u}).
UniversesResult parallel_universes(const Dataset& ds, const CriterionSpec& spec, std::size_t universes,
                                   std::size_t generations, double tau, std::uint64_t master_seed,
                                   const GaParams& ga = {});

struct StepwiseResult {
  SubsetMask mask;
  double score = 0.0;
};

// Forward-backward first-improvement sweeps from `start` (empty when unset):
// toggle variables in index order, keep any strict improvement, stop after a
// sweep without one.
StepwiseResult stepwise(const Dataset& ds, const CriterionSpec& spec, const SubsetMask* start = nullptr);

struct BaggedStepwiseResult {
  VoteTally tally;
  std::vector<SubsetMask> replicate_masks;
};

// Replicate b resamples rows with derive_seed(seed, {b}).
BaggedStepwiseResult bagged_stepwise(const Dataset& ds, const CriterionSpec& spec, std::size_t replicates,
                                     std::uint64_t seed, double tau = 0.5);

}  // namespace rarekit
