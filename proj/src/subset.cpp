#include "rarekit/subset.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/parallel.hpp"
#include "rarekit/random.hpp"

namespace rarekit {

SubsetMask SubsetMask::from_bits(std::uint64_t bits, std::size_t d) {
  require(d <= 64, ErrorCode::invalid_argument, "integer masks cover at most 64 variables");
  SubsetMask m(d);
  for (std::size_t j = 0; j < d; ++j) m.bits_[j] = (bits >> j) & 1U;
  return m;
}

SubsetMask SubsetMask::from_indices(const std::vector<std::size_t>& idx, std::size_t d) {
  SubsetMask m(d);
  for (std::size_t j : idx) {
    require(j < d, ErrorCode::invalid_argument, "variable index out of range");
    m.bits_[j] = true;
  }
  return m;
}

std::size_t SubsetMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<std::size_t> SubsetMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < bits_.size(); ++j)
    if (bits_[j]) out.push_back(j);
  return out;
}

std::uint64_t SubsetMask::to_bits() const {
  require(bits_.size() <= 64, ErrorCode::invalid_argument, "mask wider than 64 variables");
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < bits_.size(); ++j)
    if (bits_[j]) out |= std::uint64_t{1} << j;
  return out;
}

bool SubsetMask::contains(const SubsetMask& other) const {
  for (std::size_t j = 0; j < other.size(); ++j)
    if (other.test(j) && !(j < size() && test(j))) return false;
  return true;
}

std::string SubsetMask::to_string() const {
  std::string s = "{";
  bool first = true;
  for (std::size_t j : indices()) {
    if (!first) s += ',';
    s += std::to_string(j + 1);
    first = false;
  }
  return s + "}";
}

CriterionSpec CriterionSpec::bic(std::size_t n) {
  return {CriterionKind::bic, std::log(static_cast<double>(n))};
}

CriterionSpec CriterionSpec::custom(double gamma) {
  require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::invalid_argument, "gamma must be positive");
  return {CriterionKind::custom, gamma};
}

CriterionSpec parse_criterion(const std::string& name, std::size_t n, double custom_gamma) {
  if (name == "aic") return CriterionSpec::aic();
  if (name == "bic") return CriterionSpec::bic(n);
  if (name == "custom") return CriterionSpec::custom(custom_gamma);
  throw Error(ErrorCode::invalid_argument, "unknown criterion: " + name);
}

namespace {

struct Fit {
  double rss = 0.0;
  bool full_rank = true;
};

Fit least_squares(const Dataset& ds, const SubsetMask& mask) {
  require(mask.size() == ds.d(), ErrorCode::dimension_mismatch, "mask width differs from d");
  const auto cols = mask.indices();
  const auto n = static_cast<Eigen::Index>(ds.n());
  const auto p = static_cast<Eigen::Index>(cols.size() + 1);
  require(ds.n() > cols.size() + 1, ErrorCode::invalid_argument,
          "least squares needs n > |mask| + 1");
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    x(i, 0) = 1.0;
    for (std::size_t k = 0; k < cols.size(); ++k) x(i, static_cast<Eigen::Index>(k + 1)) = ds.features(row, cols[k]);
    y(i) = ds.response[row];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  Fit fit;
  if (qr.rank() < p) {
    fit.full_rank = false;
    return fit;
  }
  const Eigen::VectorXd beta = qr.solve(y);
  fit.rss = (y - x * beta).squaredNorm();
  return fit;
}

double total_sum_of_squares(const Dataset& ds) {
  double mean = 0.0;
  for (double y : ds.response) mean += y;
  mean /= static_cast<double>(ds.n());
  double tss = 0.0;
  for (double y : ds.response) tss += (y - mean) * (y - mean);
  return tss;
}

double criterion_with_tss(const Dataset& ds, const SubsetMask& mask, const CriterionSpec& spec,
                          double tss) {
  const Fit fit = least_squares(ds, mask);
  if (!fit.full_rank) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(ds.n());
  const double rss = std::max({fit.rss, 1e-12 * tss, DBL_MIN});
  return n * std::log(rss / n) + spec.gamma * static_cast<double>(mask.count() + 1);
}

// Binary tournament: lower score wins, ties to the lower population index.
std::size_t tournament(Rng& rng, const std::vector<double>& scores, std::size_t rounds) {
  std::size_t best = static_cast<std::size_t>(rng.uniform_index(scores.size()));
  for (std::size_t r = 1; r < rounds; ++r) {
    const auto c = static_cast<std::size_t>(rng.uniform_index(scores.size()));
    if (scores[c] < scores[best] || (scores[c] == scores[best] && c < best)) best = c;
  }
  return best;
}

}  // namespace

double residual_sum_of_squares(const Dataset& ds, const SubsetMask& mask) {
  const Fit fit = least_squares(ds, mask);
  return fit.full_rank ? fit.rss : std::numeric_limits<double>::infinity();
}

double criterion(const Dataset& ds, const SubsetMask& mask, const CriterionSpec& spec) {
  return criterion_with_tss(ds, mask, spec, total_sum_of_squares(ds));
}

std::string ExhaustiveResult::to_csv(const SubsetMask* truth) const {
  std::vector<std::string> header{"mask", "size", "F"};
  if (truth) header.push_back("group");
  csv::Writer w(header);
  for (std::uint64_t bits = 0; bits < scores.size(); ++bits) {
    const SubsetMask m = SubsetMask::from_bits(bits, d);
    if (truth) {
      w.row(m.to_string(), m.count(), scores[bits], m.contains(*truth) ? "I" : "II");
    } else {
      w.row(m.to_string(), m.count(), scores[bits]);
    }
  }
  return w.text();
}

ExhaustiveResult exhaustive_search(const Dataset& ds, const CriterionSpec& spec) {
  require(ds.d() <= kExhaustiveMaxVariables, ErrorCode::invalid_argument,
          "exhaustive search is capped at 20 variables");
  const double tss = total_sum_of_squares(ds);
  ExhaustiveResult out;
  out.d = ds.d();
  const std::uint64_t total = std::uint64_t{1} << ds.d();
  out.scores.resize(total);
  parallel_for(total, [&](std::size_t bits) {
    out.scores[bits] = criterion_with_tss(ds, SubsetMask::from_bits(bits, ds.d()), spec, tss);
  });
  std::uint64_t best = 0;
  for (std::uint64_t bits = 1; bits < total; ++bits)
    if (out.scores[bits] < out.scores[best]) best = bits;
  out.best = SubsetMask::from_bits(best, ds.d());
  out.best_score = out.scores[best];
  return out;
}

UniverseResult evolve(const Dataset& ds, const CriterionSpec& spec, const GaParams& ga,
                      std::size_t generations, std::uint64_t seed) {
  require(generations >= 1, ErrorCode::invalid_argument, "evolution needs at least one generation");
  require(ga.population >= 2 && ga.population % 2 == 0, ErrorCode::invalid_argument,
          "population must be even and at least 2");
  require(ga.elitism < ga.population, ErrorCode::invalid_argument, "elitism must be below population");
  require(ga.seeded.size() <= ga.population, ErrorCode::invalid_argument, "too many seeded members");
  const std::size_t d = ds.d();
  const double mutation = ga.mutation_rate > 0.0 ? ga.mutation_rate : 1.0 / static_cast<double>(d);
  const double tss = total_sum_of_squares(ds);

  std::map<SubsetMask, double> memo;
  auto evaluate = [&](const SubsetMask& m) {
    auto [it, fresh] = memo.try_emplace(m, 0.0);
    if (fresh) it->second = criterion_with_tss(ds, m, spec, tss);
    return it->second;
  };

  Rng rng(seed);
  std::vector<SubsetMask> pop;
  pop.reserve(ga.population);
  for (const auto& s : ga.seeded) {
    require(s.size() == d, ErrorCode::dimension_mismatch, "seeded mask width differs from d");
    pop.push_back(s);
  }
  while (pop.size() < ga.population) {
    SubsetMask m(d);
    for (std::size_t j = 0; j < d; ++j) m.set(j, rng.bernoulli(ga.initial_density));
    pop.push_back(std::move(m));
  }
  std::vector<double> scores(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) scores[i] = evaluate(pop[i]);

  UniverseResult res;
  res.seed = seed;
  auto update_best = [&] {
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (res.best_mask.size() == 0 || scores[i] < res.best_score) {
        res.best_mask = pop[i];
        res.best_score = scores[i];
      }
    }
    res.best_history.push_back(res.best_score);
  };
  update_best();

  std::vector<std::size_t> rank(pop.size());
  for (std::size_t g = 0; g < generations; ++g) {
    std::vector<SubsetMask> next;
    next.reserve(ga.population + 1);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    for (std::size_t e = 0; e < ga.elitism; ++e) next.push_back(pop[rank[e]]);
    while (next.size() < ga.population) {
      const SubsetMask& a = pop[tournament(rng, scores, ga.tournament)];
      const SubsetMask& b = pop[tournament(rng, scores, ga.tournament)];
      SubsetMask c1 = a, c2 = b;
      for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform() < ga.crossover_rate) {
          c1.set(j, b.test(j));
          c2.set(j, a.test(j));
        }
      }
      for (SubsetMask* c : {&c1, &c2}) {
        for (std::size_t j = 0; j < d; ++j)
          if (rng.uniform() < mutation) c->flip(j);
      }
      next.push_back(std::move(c1));
      if (next.size() < ga.population) next.push_back(std::move(c2));
    }
    pop = std::move(next);
    for (std::size_t i = 0; i < pop.size(); ++i) scores[i] = evaluate(pop[i]);
    update_best();
    res.generations_run = g + 1;
  }
  return res;
}

std::string VoteTally::to_csv(const std::vector<std::string>& names) const {
  csv::Writer w({"variable", "frequency", "selected"});
  for (std::size_t j = 0; j < frequencies.size(); ++j) {
    const std::string name = j < names.size() ? names[j] : "x" + std::to_string(j + 1);
    w.row(name, frequencies[j], selected.test(j) ? 1 : 0);
  }
  return w.text();
}

VoteTally tally_votes(const std::vector<SubsetMask>& masks, std::size_t d, double tau) {
  require(tau > 0.0 && tau <= 1.0, ErrorCode::invalid_argument, "tau must lie in (0, 1]");
  VoteTally t;
  t.universes = masks.size();
  t.tau = tau;
  t.frequencies.assign(d, 0);
  for (const auto& m : masks)
    for (std::size_t j : m.indices()) ++t.frequencies[j];
  // Guard against tau * B landing a hair above an integer.
  const auto needed = static_cast<std::size_t>(std::ceil(tau * static_cast<double>(masks.size()) - 1e-9));
  t.selected = SubsetMask(d);
  for (std::size_t j = 0; j < d; ++j) t.selected.set(j, t.frequencies[j] >= needed);
  return t;
}

UniversesResult parallel_universes(const Dataset& ds, const CriterionSpec& spec, std::size_t universes,
                                   std::size_t generations, double tau, std::uint64_t master_seed,
                                   const GaParams& ga) {
  require(universes >= 1, ErrorCode::invalid_argument, "need at least one universe");
  UniversesResult out;
  out.universes.resize(universes);
  parallel_for(universes, [&](std::size_t u) {
    out.universes[u] =
        evolve(ds, spec, ga, generations, derive_seed(master_seed, {static_cast<std::uint32_t>(u)}));
  });
  std::vector<SubsetMask> best;
  for (const auto& u : out.universes) best.push_back(u.best_mask);
  out.tally = tally_votes(best, ds.d(), tau);
  return out;
}

StepwiseResult stepwise(const Dataset& ds, const CriterionSpec& spec, const SubsetMask* start) {
  const double tss = total_sum_of_squares(ds);
  StepwiseResult res;
  res.mask = start ? *start : SubsetMask(ds.d());
  res.score = criterion_with_tss(ds, res.mask, spec, tss);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t j = 0; j < ds.d(); ++j) {
      SubsetMask trial = res.mask;
      trial.flip(j);
      if (ds.n() <= trial.count() + 1) continue;
      const double s = criterion_with_tss(ds, trial, spec, tss);
      if (s < res.score) {
        res.mask = std::move(trial);
        res.score = s;
        improved = true;
      }
    }
  }
  return res;
}

BaggedStepwiseResult bagged_stepwise(const Dataset& ds, const CriterionSpec& spec, std::size_t replicates,
                                     std::uint64_t seed, double tau) {
  require(replicates >= 1, ErrorCode::invalid_argument, "need at least one replicate");
  BaggedStepwiseResult out;
  out.replicate_masks.resize(replicates);
  parallel_for(replicates, [&](std::size_t b) {
    Rng rng(derive_seed(seed, {static_cast<std::uint32_t>(b)}));
    std::vector<std::size_t> rows(ds.n());
    for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(ds.n()));
    out.replicate_masks[b] = stepwise(ds.subset(rows), spec).mask;
  });
  out.tally = tally_votes(out.replicate_masks, ds.d(), tau);
  return out;
}

}  // namespace rarekit
