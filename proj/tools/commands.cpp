#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include "model_io.hpp"
#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/experiments.hpp"
#include "rarekit/kpca.hpp"
#include "rarekit/lago.hpp"
#include "rarekit/metrics.hpp"
#include "rarekit/subset.hpp"
#include "rarekit/svm.hpp"
#include "rarekit/synth.hpp"
#include "rarekit/trees.hpp"

namespace rarekit::cli {

void Context::save(const std::string& name, const std::string& text) {
  csv::write_file(out_ / name, text);
  log_ << "wrote " << (out_ / name).string() << '\n';
}

namespace {

using csv::format_double;

// ---- shared settings -------------------------------------------------------

const Setting kOut{"out", "rarekit-out", "output directory"};
const Setting kSeed{"seed", "1", "master seed"};
const Setting kData{"data", "", "training CSV (header row, numeric cells)"};
const Setting kLabel{"label", "y", "label column name"};
const Setting kTest{"test", "", "test CSV with the same columns"};
const Setting kFraction{"train_fraction", "",
                        "split --data into train/test with this training fraction (uses --seed)"};
const Setting kModel{"model", "model.json", "model file"};

std::vector<Setting> with_data(std::vector<Setting> extra) {
  std::vector<Setting> s{kData, kLabel, kTest, kFraction, kSeed, kOut};
  s.insert(s.end(), extra.begin(), extra.end());
  return s;
}

struct TrainTest {
  Dataset train;
  std::optional<Dataset> test;
};

const std::string& data_path(const Config& c, const std::string& key = "data") {
  const auto& path = c.text(key);
  require(!path.empty(), ErrorCode::invalid_argument, "missing dataset: set --" + key);
  return path;
}

TrainTest train_test(const Config& c, const LabelCoding& coding = LabelCoding::binary_default()) {
  TrainTest tt;
  Dataset all = load_csv(data_path(c), c.text("label"), coding);
  if (!c.empty("test")) {
    tt.test = load_csv(c.text("test"), c.text("label"), coding);
    require(tt.test->d() == all.d(), ErrorCode::dimension_mismatch,
            "test data has a different number of features");
    tt.train = std::move(all);
  } else if (!c.empty("train_fraction")) {
    auto [train, test] = split(all, SplitSpec{c.number("train_fraction"), c.seed("seed")});
    tt.train = std::move(train);
    tt.test = std::move(test);
  } else {
    tt.train = std::move(all);
  }
  return tt;
}

std::pair<Dataset, Dataset> require_test(const Config& c) {
  TrainTest tt = train_test(c);
  require(tt.test.has_value(), ErrorCode::invalid_argument,
          "this command needs test data: set --test or --train_fraction");
  return {std::move(tt.train), std::move(*tt.test)};
}

// Rows to score: a labelled dataset when the label column is present, else
// bare features.
struct ScoringInput {
  Matrix features;
  std::optional<std::vector<double>> labels;
};

ScoringInput scoring_input(const Config& c) {
  const auto& path = data_path(c);
  const auto header = read_header(path);
  const auto& label = c.text("label");
  if (!label.empty() && std::find(header.begin(), header.end(), label) != header.end()) {
    Dataset ds = load_csv(path, label);
    return {std::move(ds.features), std::move(ds.response)};
  }
  return {load_features(path), std::nullopt};
}

void check_width(std::size_t got, std::size_t want) {
  require(got == want, ErrorCode::dimension_mismatch,
          "data has " + std::to_string(got) + " features but the model expects " + std::to_string(want));
}

std::string predictions_csv(const std::vector<double>* decision, const std::vector<int>& predicted,
                            const std::optional<std::vector<double>>& labels) {
  std::string text = "row_id";
  if (decision) text += ",decision";
  text += ",predicted";
  if (labels) text += ",label";
  text += '\n';
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    text += std::to_string(i);
    if (decision) text += "," + format_double((*decision)[i]);
    text += "," + std::to_string(predicted[i]);
    if (labels) text += "," + std::to_string((*labels)[i] > 0.0 ? 1 : -1);
    text += '\n';
  }
  return text;
}

void report_errors(Context& ctx, csv::Writer& w, const std::string& set, const std::vector<int>& predicted,
                   std::span<const double> labels) {
  const std::size_t errors = misclassification(predicted, labels);
  w.row(set, labels.size(), errors);
  ctx.log() << set << " errors: " << errors << " of " << labels.size() << '\n';
}

KernelSpec kernel_from(const Config& c) {
  KernelSpec spec{parse_kernel_kind(c.text("kernel")), c.number("h")};
  spec.validate();
  return spec;
}

std::size_t resolve_m(const std::string& value, std::size_t d) {
  if (value == "all") return d;
  if (value == "sqrt") return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
  Config tmp;
  tmp.set("m", value);
  const std::size_t m = tmp.count("m");
  require(m >= 1 && m <= d, ErrorCode::invalid_argument, "m must lie in [1, d]");
  return m;
}

std::vector<std::size_t> resolve_ms(const Config& c, std::size_t d) {
  if (c.text("ms") == "all") {
    std::vector<std::size_t> ms(d);
    for (std::size_t m = 1; m <= d; ++m) ms[m - 1] = m;
    return ms;
  }
  auto ms = c.counts("ms");
  require(!ms.empty(), ErrorCode::invalid_argument, "ms must not be empty");
  for (std::size_t m : ms) require(m >= 1 && m <= d, ErrorCode::invalid_argument, "every m must lie in [1, d]");
  return ms;
}

CriterionSpec criterion_from(const Config& c, std::size_t n) {
  const auto& name = c.text("criterion");
  if (auto gamma = csv::parse_double(name)) {
    require(*gamma >= 0.0, ErrorCode::invalid_argument, "criterion penalty must be nonnegative");
    return CriterionSpec::custom(*gamma);
  }
  return parse_criterion(name, n);
}

SubsetMask truth_from(const Config& c, std::size_t d) {
  SubsetMask mask(d);
  for (std::size_t v : c.counts("truth")) {
    require(v >= 1 && v <= d, ErrorCode::invalid_argument, "truth lists 1-based variable numbers in [1, d]");
    mask.set(v - 1);
  }
  return mask;
}

std::string selected_csv(const SubsetMask& mask, const std::vector<std::string>& names) {
  csv::Writer w({"variable", "index"});
  for (std::size_t j : mask.indices()) w.row(names.at(j), j + 1);
  return w.text();
}

void log_selected(Context& ctx, const SubsetMask& mask, const std::vector<std::string>& names) {
  ctx.log() << "selected:";
  for (std::size_t j : mask.indices()) ctx.log() << ' ' << names.at(j);
  if (mask.count() == 0) ctx.log() << " (none)";
  ctx.log() << '\n';
}

// ---- kpca ---------------------------------------------------------------------

void run_kpca(const Config& c, Context& ctx) {
  const auto& path = data_path(c);
  Matrix x;
  const auto header = read_header(path);
  const auto& label = c.text("label");
  if (!label.empty() && std::find(header.begin(), header.end(), label) != header.end()) {
    x = load_csv(path, label, LabelCoding::real()).features;
  } else {
    x = load_features(path);
  }
  KpcaOptions opt;
  opt.q = c.count("q");
  opt.tol_eig = c.number("tol");
  const KpcaModel model = fit_kpca(x, kernel_from(c), opt);
  if (model.truncated()) {
    ctx.log() << "note: only " << model.q() << " of " << model.requested_q
              << " components exceed the eigenvalue tolerance\n";
  }
  std::vector<std::string> header_out{"row_id"};
  for (std::size_t j = 0; j < model.q(); ++j) header_out.push_back("score" + std::to_string(j + 1));
  auto scores_csv = [&](const Matrix& s) {
    csv::Writer w(header_out);
    for (std::size_t i = 0; i < s.rows(); ++i) {
      std::vector<double> row{static_cast<double>(i)};
      const auto r = s.row(i);
      row.insert(row.end(), r.begin(), r.end());
      w.row(row);
    }
    return w.text();
  };
  ctx.save("scores.csv", scores_csv(model.training_scores));
  csv::Writer ev({"component", "eigenvalue"});
  for (std::size_t j = 0; j < model.q(); ++j) ev.row(j + 1, model.eigenvalues[j]);
  ctx.save("eigenvalues.csv", ev.text());
  if (!c.empty("project")) {
    const Matrix xp = load_features(c.text("project"));
    const Matrix* use = &xp;
    Matrix dropped;
    if (xp.cols() == x.cols() + 1) {
      // The projection file carries the label column too; drop it by name.
      std::vector<std::string> names;
      load_features(c.text("project"), &names);
      const auto it = std::find(names.begin(), names.end(), label);
      require(it != names.end(), ErrorCode::dimension_mismatch, "projection data has the wrong width");
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] != label) keep.push_back(j);
      dropped = xp.select_cols(keep);
      use = &dropped;
    }
    check_width(use->cols(), x.cols());
    ctx.save("projection.csv", scores_csv(project(model, *use)));
  }
}

// ---- svm ----------------------------------------------------------------------

const std::vector<Setting> kKernelSettings{
    {"kernel", "gaussian", "kernel: gaussian (exp(-h |u-v|^2)) or linear"},
    {"h", "1", "gaussian kernel parameter h"},
};

HingeOptions hinge_options(const Config& c) {
  HingeOptions opt;
  const double gamma = c.number("gamma");
  require(gamma > 0.0, ErrorCode::invalid_argument, "gamma must be positive");
  opt.lambda = lambda_from_gamma(gamma);
  opt.epochs = c.count("epochs");
  opt.seed = c.seed("seed");
  opt.solver = parse_hinge_solver(c.text("solver"));
  return opt;
}

void run_svm_train(const Config& c, Context& ctx) {
  const TrainTest tt = train_test(c);
  const KernelClassifier model = train_kernel_hinge(tt.train, kernel_from(c), hinge_options(c));
  save_model(ctx.out() / "model.json", "kernel_hinge", to_json(model));
  ctx.log() << "wrote " << (ctx.out() / "model.json").string() << '\n';
  csv::Writer w({"set", "n", "errors"});
  report_errors(ctx, w, "train", model.predict(tt.train.features), tt.train.response);
  csv::Writer hist({"epoch", "objective"});
  for (std::size_t e = 0; e < model.objective_history.size(); ++e) hist.row(e, model.objective_history[e]);
  ctx.save("objective.csv", hist.text());
  if (tt.test) {
    const auto decision = model.decision(tt.test->features);
    std::vector<int> predicted(decision.size());
    for (std::size_t i = 0; i < decision.size(); ++i) predicted[i] = decision[i] >= 0.0 ? 1 : -1;
    report_errors(ctx, w, "test", predicted, tt.test->response);
    ctx.save("predictions.csv", predictions_csv(&decision, predicted, tt.test->response));
  }
  ctx.save("errors.csv", w.text());
}

void run_svm_predict(const Config& c, Context& ctx) {
  const KernelClassifier model = classifier_from_json(load_model(c.text("model"), "kernel_hinge"));
  const ScoringInput in = scoring_input(c);
  check_width(in.features.cols(), model.training_features.cols());
  const auto decision = model.decision(in.features);
  std::vector<int> predicted(decision.size());
  for (std::size_t i = 0; i < decision.size(); ++i) predicted[i] = decision[i] >= 0.0 ? 1 : -1;
  ctx.save("predictions.csv", predictions_csv(&decision, predicted, in.labels));
  if (in.labels) ctx.log() << "errors: " << misclassification(predicted, *in.labels) << " of " << predicted.size() << '\n';
}

void run_svm_grid(const Config& c, Context& ctx) {
  const auto [train, test] = require_test(c);
  const SensitivityGrid grid =
      sensitivity_grid(train, test, c.numbers("gammas"), c.numbers("hs"), c.count("epochs"), c.seed("seed"));
  ctx.save("grid.csv", grid.to_csv());
}

// ---- lago ---------------------------------------------------------------------

LagoOptions lago_options(const Config& c) {
  LagoOptions opt;
  opt.k = c.count("k");
  opt.variant = parse_lago_variant(c.text("variant"));
  return opt;
}

std::vector<double> alpha_grid(const Config& c) {
  return c.empty("alphas") ? default_alpha_grid() : c.numbers("alphas");
}

void save_ranking(Context& ctx, const LagoModel& model, const Matrix& x,
                  const std::optional<std::vector<double>>& labels) {
  const Ranking r = rank(model, x);
  ctx.save("ranking.csv", r.to_csv());
  if (labels) {
    std::vector<std::size_t> cutoffs{10, 50, 100};
    const RankingEval ev = evaluate_ranking(r.scores, *labels, cutoffs);
    csv::Writer w({"statistic", "value"});
    w.row("average_precision", ev.average_precision);
    for (const auto& [k, hits] : ev.hits_at_k) w.row("hits_at_" + std::to_string(k), hits);
    ctx.save("metrics.csv", w.text());
    ctx.log() << "average precision: " << format_double(ev.average_precision) << '\n';
  }
}

void run_lago_fit(const Config& c, Context& ctx) {
  const TrainTest tt = train_test(c);
  LagoOptions opt = lago_options(c);
  if (c.text("alpha") == "tune") {
    const AlphaTuning tuning = tune_alpha(tt.train, opt, alpha_grid(c), c.count("folds"), c.seed("seed"));
    ctx.save("tuning.csv", tuning.to_csv());
    opt.alpha = tuning.best_alpha;
    ctx.log() << "tuned alpha: " << format_double(opt.alpha) << '\n';
  } else {
    opt.alpha = c.number("alpha");
  }
  const LagoModel model = fit_lago(tt.train, opt);
  save_model(ctx.out() / "model.json", "lago", to_json(model));
  ctx.log() << "wrote " << (ctx.out() / "model.json").string() << '\n';
  if (tt.test) save_ranking(ctx, model, tt.test->features, tt.test->response);
}

void run_lago_rank(const Config& c, Context& ctx) {
  const LagoModel model = lago_from_json(load_model(c.text("model"), "lago"));
  const ScoringInput in = scoring_input(c);
  check_width(in.features.cols(), model.dim());
  save_ranking(ctx, model, in.features, in.labels);
}

void run_lago_tune(const Config& c, Context& ctx) {
  const Dataset ds = load_csv(data_path(c), c.text("label"));
  const AlphaTuning tuning = tune_alpha(ds, lago_options(c), alpha_grid(c), c.count("folds"), c.seed("seed"));
  ctx.save("tuning.csv", tuning.to_csv());
  ctx.log() << "best alpha: " << format_double(tuning.best_alpha) << '\n';
}

// ---- boost --------------------------------------------------------------------

void run_boost_train(const Config& c, Context& ctx) {
  const TrainTest tt = train_test(c);
  BoostOptions opt;
  opt.rounds = c.count("rounds");
  opt.depth = c.count("depth");
  opt.seed = c.seed("seed");
  const BoostEnsemble ens = adaboost(tt.train, opt);
  save_model(ctx.out() / "model.json", "adaboost", to_json(ens));
  ctx.log() << "wrote " << (ctx.out() / "model.json").string() << " (" << ens.members.size() << " members)\n";
  const auto train_err = ens.staged_errors(tt.train);
  std::vector<std::size_t> test_err;
  if (tt.test) test_err = ens.staged_errors(*tt.test);
  csv::Writer w(tt.test ? std::vector<std::string>{"round", "vote", "error", "train_errors", "test_errors"}
                        : std::vector<std::string>{"round", "vote", "error", "train_errors"});
  for (std::size_t b = 0; b < ens.members.size(); ++b) {
    const auto& m = ens.members[b];
    if (tt.test) {
      w.row(b + 1, m.vote, m.error, train_err[b], test_err[b]);
    } else {
      w.row(b + 1, m.vote, m.error, train_err[b]);
    }
  }
  ctx.save("rounds.csv", w.text());
  if (ens.stop == BoostStop::perfect_member) ctx.log() << "stopped: a member classified every point correctly\n";
  if (ens.stop == BoostStop::weak_learner_failed) ctx.log() << "stopped: base learner error reached 1/2\n";
}

void run_boost_predict(const Config& c, Context& ctx) {
  const BoostEnsemble ens = boost_from_json(load_model(c.text("model"), "adaboost"));
  require(!ens.members.empty(), ErrorCode::parse, "model has no members");
  const ScoringInput in = scoring_input(c);
  check_width(in.features.cols(), ens.members.front().classifier.dim);
  std::vector<double> margin(in.features.rows());
  std::vector<int> predicted(in.features.rows());
  for (std::size_t i = 0; i < margin.size(); ++i) {
    margin[i] = ens.margin(in.features.row(i));
    predicted[i] = ens.predict(in.features.row(i));
  }
  ctx.save("predictions.csv", predictions_csv(&margin, predicted, in.labels));
  if (in.labels) ctx.log() << "errors: " << misclassification(predicted, *in.labels) << " of " << predicted.size() << '\n';
}

// One ensemble of max(rounds) members per depth; a shorter run is its prefix.
// An ensemble that stopped early is scored with all of its members.
void run_boost_grid(const Config& c, Context& ctx) {
  const auto [train, test] = require_test(c);
  const auto depths = c.counts("depths");
  const auto rounds = c.counts("rounds");
  require(!depths.empty() && !rounds.empty(), ErrorCode::invalid_argument, "depths and rounds must be nonempty");
  for (std::size_t r : rounds) require(r >= 1, ErrorCode::invalid_argument, "rounds entries must be >= 1");
  csv::Writer w({"depth", "rounds", "errors"});
  for (std::size_t depth : depths) {
    BoostOptions opt;
    opt.rounds = *std::max_element(rounds.begin(), rounds.end());
    opt.depth = depth;
    opt.seed = c.seed("seed");
    const auto staged = adaboost(train, opt).staged_errors(test);
    for (std::size_t r : rounds) w.row(depth, r, staged[std::min(r, staged.size()) - 1]);
  }
  ctx.save("grid.csv", w.text());
}

// ---- forest -------------------------------------------------------------------

void run_forest_train(const Config& c, Context& ctx) {
  const TrainTest tt = train_test(c);
  ForestOptions opt;
  opt.trees = c.count("trees");
  require(opt.trees >= 1, ErrorCode::invalid_argument, "trees must be >= 1");
  opt.m = resolve_m(c.text("m"), tt.train.d());
  opt.seed = c.seed("seed");
  const Forest forest = random_forest(tt.train, opt);
  save_model(ctx.out() / "model.json", "forest", to_json(forest));
  ctx.log() << "wrote " << (ctx.out() / "model.json").string() << '\n';
  csv::Writer w({"set", "n", "errors"});
  report_errors(ctx, w, "train", forest.predict(tt.train.features), tt.train.response);
  if (tt.test) report_errors(ctx, w, "test", forest.predict(tt.test->features), tt.test->response);
  ctx.save("errors.csv", w.text());
}

void run_forest_predict(const Config& c, Context& ctx) {
  const Forest forest = forest_from_json(load_model(c.text("model"), "forest"));
  require(!forest.trees.empty(), ErrorCode::parse, "model has no trees");
  const ScoringInput in = scoring_input(c);
  check_width(in.features.cols(), forest.trees.front().dim);
  const auto predicted = forest.predict(in.features);
  ctx.save("predictions.csv", predictions_csv(nullptr, predicted, in.labels));
  if (in.labels) ctx.log() << "errors: " << misclassification(predicted, *in.labels) << " of " << predicted.size() << '\n';
}

void run_forest_grid(const Config& c, Context& ctx) {
  const auto [train, test] = require_test(c);
  const ForestGrid grid = forest_grid(train, test, resolve_ms(c, train.d()), c.counts("Bs"), c.seed("seed"));
  ctx.save("grid.csv", grid.to_csv());
}

// ---- select -------------------------------------------------------------------

GaParams ga_params(const Config& c) {
  GaParams ga;
  ga.population = c.count("population");
  return ga;
}

void run_select(const Config& c, Context& ctx) {
  const Dataset ds = load_csv(data_path(c), c.text("label"), LabelCoding::real());
  const CriterionSpec spec = criterion_from(c, ds.n());
  const auto& mode = c.text("mode");
  const auto& names = ds.feature_names;
  const std::uint64_t seed = c.seed("seed");
  SubsetMask selected;
  if (mode == "exhaustive") {
    const ExhaustiveResult ex = exhaustive_search(ds, spec);
    const SubsetMask truth = truth_from(c, ds.d());
    ctx.save("subsets.csv", ex.to_csv(c.empty("truth") ? nullptr : &truth));
    selected = ex.best;
    ctx.log() << "minimum criterion " << format_double(ex.best_score) << " at " << ex.best.to_string() << '\n';
  } else if (mode == "evolve") {
    const UniverseResult u = evolve(ds, spec, ga_params(c), c.count("generations"), seed);
    csv::Writer w({"generation", "best_F"});
    for (std::size_t g = 0; g < u.best_history.size(); ++g) w.row(g, u.best_history[g]);
    ctx.save("history.csv", w.text());
    selected = u.best_mask;
  } else if (mode == "universes") {
    const UniversesResult r =
        parallel_universes(ds, spec, c.count("B"), c.count("generations"), c.number("tau"), seed, ga_params(c));
    ctx.save("frequencies.csv", r.tally.to_csv(names));
    csv::Writer w({"universe", "seed", "mask", "F"});
    for (std::size_t u = 0; u < r.universes.size(); ++u) {
      w.row(u, std::to_string(r.universes[u].seed), r.universes[u].best_mask.to_string(), r.universes[u].best_score);
    }
    ctx.save("universes.csv", w.text());
    selected = r.tally.selected;
  } else if (mode == "bagged-stepwise") {
    const BaggedStepwiseResult r = bagged_stepwise(ds, spec, c.count("B"), seed, c.number("tau"));
    ctx.save("frequencies.csv", r.tally.to_csv(names));
    csv::Writer w({"replicate", "mask"});
    for (std::size_t b = 0; b < r.replicate_masks.size(); ++b) w.row(b, r.replicate_masks[b].to_string());
    ctx.save("replicates.csv", w.text());
    selected = r.tally.selected;
  } else {
    throw Error(ErrorCode::invalid_argument,
                "unknown mode: " + mode + " (expected exhaustive, evolve, universes or bagged-stepwise)");
  }
  ctx.save("selected.csv", selected_csv(selected, names));
  log_selected(ctx, selected, names);
}

// ---- experiments ----------------------------------------------------------------

const std::vector<Setting> kToySettings{
    {"n", "50", "toy sample size"},
    {"d", "10", "toy candidate variables"},
    {"truth", "2,5,8", "1-based variables carrying signal (unit coefficients)"},
    {"noise_sd", "1", "noise standard deviation"},
};

Dataset toy_from(const Config& c, std::uint64_t seed) {
  synth::ToyRegressionSpec spec;
  spec.n = c.count("n");
  spec.d = c.count("d");
  spec.noise_sd = c.number("noise_sd");
  spec.truth.clear();
  for (std::size_t v : c.counts("truth")) {
    require(v >= 1 && v <= spec.d, ErrorCode::invalid_argument, "truth lists 1-based variable numbers in [1, d]");
    spec.truth.push_back(v - 1);
  }
  return synth::toy_regression(spec, seed);
}

void run_exp_toy(const Config& c, Context& ctx) { ctx.save("toy.csv", to_csv_text(toy_from(c, c.seed("seed")))); }

void run_exp_fig2(const Config& c, Context& ctx) {
  const auto result = experiments::kpca_toy(c.count("n"), c.number("max_radius"), c.number("h"), c.seed("seed"));
  std::vector<std::string> header{"x1", "x2", "radius"};
  for (std::size_t j = 0; j < result.model.q(); ++j) header.push_back("score" + std::to_string(j + 1));
  csv::Writer w(header);
  for (std::size_t i = 0; i < result.toy.points.rows(); ++i) {
    std::vector<double> row{result.toy.points(i, 0), result.toy.points(i, 1), result.toy.radius[i]};
    for (std::size_t j = 0; j < result.model.q(); ++j) row.push_back(result.model.training_scores(i, j));
    w.row(row);
  }
  ctx.save("fig2.csv", w.text());
  csv::Writer s({"statistic", "value"});
  s.row("spearman_score1_radius", result.spearman_first);
  for (std::size_t j = 0; j < result.model.q(); ++j) s.row("eigenvalue" + std::to_string(j + 1), result.model.eigenvalues[j]);
  ctx.save("fig2_summary.csv", s.text());
  ctx.log() << "Spearman(first score, radius) = " << format_double(result.spearman_first) << '\n';
}

const std::vector<Setting> kSpamSettings{
    {"data", "", "spam CSV; empty uses the synthetic fallback"},
    {"label", "y", "label column name"},
    {"train_fraction", format_double(experiments::kSpamTrainFraction), "training fraction of the split"},
    {"fallback_n", "1500", "fallback rows"},
    {"fallback_d", "30", "fallback features"},
    {"fallback_seed", "1", "fallback generator seed"},
    kSeed,
    kOut,
};

experiments::SpamSplit spam_from(const Config& c, Context& ctx) {
  experiments::SpamSource src;
  src.data = c.text("data");
  src.label = c.text("label");
  src.train_fraction = c.number("train_fraction");
  src.split_seed = c.seed("seed");
  src.fallback_n = c.count("fallback_n");
  src.fallback_d = c.count("fallback_d");
  src.fallback_seed = c.seed("fallback_seed");
  auto s = experiments::spam_split(src);
  ctx.log() << (s.synthetic ? "using synthetic spam fallback" : "using " + src.data) << ": " << s.train.n()
            << " train, " << s.test.n() << " test, " << s.train.d() << " features\n";
  return s;
}

void run_exp_fig3a(const Config& c, Context& ctx) {
  const auto s = spam_from(c, ctx);
  const SensitivityGrid grid =
      sensitivity_grid(s.train, s.test, c.numbers("gammas"), c.numbers("hs"), c.count("epochs"), c.seed("seed"));
  ctx.save("fig3a.csv", grid.to_csv());
}

void run_exp_fig3b(const Config& c, Context& ctx) {
  const auto s = spam_from(c, ctx);
  const ForestGrid grid = forest_grid(s.train, s.test, resolve_ms(c, s.train.d()), c.counts("Bs"), c.seed("seed"));
  ctx.save("fig3b.csv", grid.to_csv());
}

void run_exp_fig4(const Config& c, Context& ctx) {
  const Dataset ds = toy_from(c, c.seed("seed"));
  const ExhaustiveResult ex = exhaustive_search(ds, criterion_from(c, ds.n()));
  const SubsetMask truth = truth_from(c, ds.d());
  ctx.save("fig4.csv", ex.to_csv(&truth));
  ctx.log() << "minimum criterion at " << ex.best.to_string() << '\n';
}

void run_exp_fig5(const Config& c, Context& ctx) {
  const Dataset ds = c.empty("data") ? toy_from(c, c.seed("toy_seed"))
                                      : load_csv(c.text("data"), c.text("label"), LabelCoding::real());
  const auto rows = experiments::universe_sweep(ds, criterion_from(c, ds.n()), c.counts("Bs"),
                                                c.count("replicates"), c.count("generations"), c.number("tau"),
                                                c.seed("seed"));
  ctx.save("fig5.csv", experiments::to_csv(rows, ds.feature_names));
  const SubsetMask truth = c.empty("data") ? truth_from(c, ds.d()) : SubsetMask(ds.d());
  csv::Writer w({"B", "replicate", "master_seed", "selected", "exact"});
  for (const auto& r : rows) {
    w.row(r.universes, r.replicate, std::to_string(r.master_seed), r.tally.selected.to_string(),
          c.empty("data") && r.tally.selected == truth ? 1 : 0);
  }
  ctx.save("fig5_selected.csv", w.text());
}

void run_exp_datasets(const Config& c, Context& ctx) {
  const std::uint64_t seed = c.seed("seed");
  ctx.save("spam_fallback.csv", to_csv_text(synth::spam_like(c.count("fallback_n"), c.count("fallback_d"), seed)));
  const synth::RareMixture mix;
  ctx.save("mixture_train.csv", to_csv_text(mix.sample(c.count("mixture_n"), seed)));
  ctx.save("mixture_test.csv", to_csv_text(mix.sample(c.count("mixture_n"), seed + 1)));
  const auto sph = synth::spherical_toy(c.count("spherical_n"), 3.0, seed);
  ctx.save("spherical.csv", to_csv_text(make_dataset(sph.points, sph.radius, ResponseKind::real)));
}

std::vector<Setting> concat(std::vector<Setting> a, const std::vector<Setting>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Command> build_commands() {
  const Setting gammas{"gammas", "1,10,100,1000", "penalty grid (lambda = 1/(2 gamma))"};
  const Setting hs{"hs", "0.001,0.01,0.1,1,10", "gaussian h grid"};
  const Setting epochs{"epochs", "100", "solver epochs"};
  const Setting ms{"ms", "all", "features per split: list, lo:hi ranges, or all (1..d)"};
  const Setting bs{"Bs", "100,200,400", "forest sizes"};
  const Setting criterion{"criterion", "aic", "aic, bic, or a numeric penalty per parameter"};
  const std::vector<Setting> lago_common{
      {"variant", "slago", "slago (spherical) or elago (elliptical)"},
      {"k", "5", "background neighbours per rare centre"},
      {"alphas", "", "alpha grid for tuning (default 9 log-spaced values in [0.01, 100])"},
      {"folds", "5", "cross-validation folds for tuning"},
  };
  const Setting model_label{"label", "y", "label column; used for error reporting when present"};

  std::vector<Command> cmds;
  cmds.push_back({"kpca", "kernel principal components of a dataset",
                  {kData,
                   {"label", "", "column to exclude from the features (optional)"},
                   kKernelSettings[0], kKernelSettings[1],
                   {"q", "2", "number of components"},
                   {"tol", "0", "eigenvalue cutoff; 0 uses 1e-10 times the largest eigenvalue"},
                   {"project", "", "CSV of new rows to project"},
                   kOut},
                  run_kpca});
  cmds.push_back({"svm train", "train the kernel hinge classifier",
                  with_data(concat(kKernelSettings,
                                   {{"gamma", "10", "hinge penalty gamma (lambda = 1/(2 gamma))"},
                                    epochs,
                                    {"solver", "dual", "dual (coordinate descent) or subgradient"}})),
                  run_svm_train});
  cmds.push_back({"svm predict", "apply a trained kernel classifier",
                  {kModel, kData, model_label, kOut}, run_svm_predict});
  cmds.push_back({"svm grid", "test errors over a (gamma, h) grid", with_data({gammas, hs, epochs}), run_svm_grid});
  cmds.push_back({"lago fit", "fit a LAGO ranking model (alpha=tune runs cross-validation)",
                  with_data(concat(lago_common, {{"alpha", "1", "bandwidth multiplier, or tune"}})), run_lago_fit});
  cmds.push_back({"lago rank", "rank rows by a fitted LAGO model", {kModel, kData, model_label, kOut}, run_lago_rank});
  cmds.push_back({"lago tune", "cross-validated average precision over an alpha grid",
                  concat({kData, kLabel, kSeed, kOut}, lago_common), run_lago_tune});
  cmds.push_back({"boost train", "AdaBoost with decision stumps or depth-limited trees",
                  with_data({{"rounds", "50", "boosting rounds"}, {"depth", "1", "tree depth (1 = stumps)"}}),
                  run_boost_train});
  cmds.push_back({"boost predict", "apply a trained AdaBoost ensemble", {kModel, kData, model_label, kOut},
                  run_boost_predict});
  cmds.push_back({"boost grid", "test errors over a (depth, rounds) grid",
                  with_data({{"depths", "1,2,3", "tree depths"}, {"rounds", "10,25,50,100", "ensemble sizes"}}),
                  run_boost_grid});
  cmds.push_back({"forest train", "random forest (m=all gives bagging)",
                  with_data({{"trees", "100", "number of trees"},
                             {"m", "sqrt", "features per split: a number, sqrt, or all"}}),
                  run_forest_train});
  cmds.push_back({"forest predict", "apply a trained forest", {kModel, kData, model_label, kOut},
                  run_forest_predict});
  cmds.push_back({"forest grid", "test errors over an (m, B) grid", with_data({ms, bs}), run_forest_grid});
  cmds.push_back({"select", "variable selection for linear regression",
                  {kData, kLabel,
                   {"mode", "universes", "exhaustive, evolve, universes, or bagged-stepwise"},
                   criterion,
                   {"B", "10", "universes or bootstrap replicates"},
                   {"generations", "6", "generations per universe"},
                   {"tau", "0.5", "vote threshold: selected when frequency >= ceil(tau B)"},
                   {"population", "50", "GA population size (even)"},
                   {"truth", "", "1-based true variables; adds a group column to the exhaustive table"},
                   kSeed, kOut},
                  run_select});
  cmds.push_back({"experiments toy", "write the linear-regression toy dataset",
                  concat(kToySettings, {kSeed, kOut}), run_exp_toy});
  cmds.push_back({"experiments fig2", "kernel PCA on points with uniform radius",
                  {{"n", "200", "points"}, {"max_radius", "3", "radii are uniform on [0, max_radius]"},
                   {"h", "1", "gaussian kernel parameter"}, kSeed, kOut},
                  run_exp_fig2});
  cmds.push_back({"experiments fig3a", "hinge classifier test errors over (gamma, h) on the spam split",
                  concat(kSpamSettings, {gammas, hs, epochs}), run_exp_fig3a});
  cmds.push_back({"experiments fig3b", "random forest test errors over (m, B) on the spam split",
                  concat(kSpamSettings, {ms, bs}), run_exp_fig3b});
  cmds.push_back({"experiments fig4", "criterion value of every subset of the toy variables",
                  concat(kToySettings, {criterion, kSeed, kOut}), run_exp_fig4});
  cmds.push_back({"experiments fig5", "vote frequencies by number of universes",
                  concat(kToySettings,
                         {{"data", "", "regression CSV instead of the toy"},
                          {"label", "y", "response column for --data"},
                          {"toy_seed", "1", "toy dataset seed"},
                          {"Bs", "1,5,10", "numbers of universes"},
                          {"replicates", "20", "independent repeats per B"},
                          {"generations", "6", "generations per universe"},
                          {"tau", "0.5", "vote threshold"},
                          criterion, kSeed, kOut}),
                  run_exp_fig5});
  cmds.push_back({"experiments datasets", "write the bundled synthetic datasets as CSV",
                  {{"fallback_n", "1500", "spam fallback rows"},
                   {"fallback_d", "30", "spam fallback features"},
                   {"mixture_n", "2000", "rows per mixture file"},
                   {"spherical_n", "200", "spherical toy points"},
                   kSeed, kOut},
                  run_exp_datasets});
  return cmds;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = build_commands();
  return cmds;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace rarekit::cli
