#include "rarekit/experiments.hpp"

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/metrics.hpp"
#include "rarekit/random.hpp"

namespace rarekit::experiments {

SpamSplit spam_split(const SpamSource& source) {
  SpamSplit out;
  Dataset all;
  if (source.data.empty()) {
    all = synth::spam_like(source.fallback_n, source.fallback_d, source.fallback_seed);
    out.synthetic = true;
  } else {
    all = load_csv(source.data, source.label);
  }
  auto [train, test] = split(all, SplitSpec{source.train_fraction, source.split_seed});
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

KpcaToy kpca_toy(std::size_t n, double max_radius, double h, std::uint64_t seed) {
  KpcaToy out;
  out.toy = synth::spherical_toy(n, max_radius, seed);
  out.model = fit_kpca(out.toy.points, KernelSpec::gaussian(h), KpcaOptions{2, 0.0});
  require(out.model.q() >= 1, ErrorCode::degenerate, "kernel PCA found no component");
  std::vector<double> first(n);
  for (std::size_t i = 0; i < n; ++i) first[i] = out.model.training_scores(i, 0);
  out.spearman_first = spearman(first, out.toy.radius);
  return out;
}

std::vector<UniverseSweepRow> universe_sweep(const Dataset& ds, const CriterionSpec& spec,
                                             const std::vector<std::size_t>& universe_counts,
                                             std::size_t replicates, std::size_t generations,
                                             double tau, std::uint64_t seed) {
  require(!universe_counts.empty() && replicates >= 1, ErrorCode::invalid_argument,
          "need at least one universe count and one replicate");
  std::vector<UniverseSweepRow> rows;
  for (std::size_t b : universe_counts) {
    require(b >= 1, ErrorCode::invalid_argument, "universe counts must be >= 1");
    for (std::size_t r = 0; r < replicates; ++r) {
      const std::uint64_t master = derive_seed(seed, {static_cast<std::uint32_t>(r)});
      auto result = parallel_universes(ds, spec, b, generations, tau, master);
      rows.push_back({b, r, master, std::move(result.tally)});
    }
  }
  return rows;
}

std::string to_csv(const std::vector<UniverseSweepRow>& rows, const std::vector<std::string>& names) {
  csv::Writer w({"B", "replicate", "variable", "frequency", "selected"});
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.tally.frequencies.size(); ++j) {
      w.row(row.universes, row.replicate, names.at(j), row.tally.frequencies[j],
            row.tally.selected.test(j) ? 1 : 0);
    }
  }
  return w.text();
}

}  // namespace rarekit::experiments
