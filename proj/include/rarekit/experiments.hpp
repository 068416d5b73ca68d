#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rarekit/dataset.hpp"
#include "rarekit/kpca.hpp"
#include "rarekit/subset.hpp"
#include "rarekit/synth.hpp"

namespace rarekit::experiments {

// 1536 of the 4601 spam messages train; the rest test.
inline constexpr double kSpamTrainFraction = 1536.0 / 4601.0;

struct SpamSource {
  std::string data;  // CSV path; empty selects the synthetic fallback
  std::string label = "y";
  double train_fraction = kSpamTrainFraction;
  std::uint64_t split_seed = 1;
  std::size_t fallback_n = 1500;
  std::size_t fallback_d = 30;
  std::uint64_t fallback_seed = 1;
};

struct SpamSplit {
  Dataset train;
  Dataset test;
  bool synthetic = false;
};

SpamSplit spam_split(const SpamSource& source);

struct KpcaToy {
  synth::SphericalToy toy;
  KpcaModel model;
  double spearman_first = 0.0;  // first score vs radius
};

KpcaToy kpca_toy(std::size_t n, double max_radius, double h, std::uint64_t seed);

struct UniverseSweepRow {
  std::size_t universes = 0;
  std::size_t replicate = 0;
  std::uint64_t master_seed = 0;
  VoteTally tally;
};

// Replicate r uses master seed derive_seed(seed, {r}) for every B, so the
// universes of a smaller B are a prefix of those of a larger one.
std::vector<UniverseSweepRow> universe_sweep(const Dataset& ds, const CriterionSpec& spec,
                                             const std::vector<std::size_t>& universe_counts,
                                             std::size_t replicates, std::size_t generations,
                                             double tau, std::uint64_t seed);

// B,replicate,variable,frequency,selected
std::string to_csv(const std::vector<UniverseSweepRow>& rows, const std::vector<std::string>& names);

}  // namespace rarekit::experiments
