#include "rarekit/lago.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/metrics.hpp"
#include "rarekit/parallel.hpp"
#include "rarekit/simd.hpp"

namespace rarekit {

std::string to_string(LagoVariant v) { return v == LagoVariant::spherical ? "slago" : "elago"; }

LagoVariant parse_lago_variant(const std::string& name) {
  if (name == "slago" || name == "spherical") return LagoVariant::spherical;
  if (name == "elago" || name == "elliptical") return LagoVariant::elliptical;
  throw Error(ErrorCode::invalid_argument, "unknown LAGO variant: " + name);
}

std::vector<std::size_t> nearest_rows(std::span<const double> center, const Matrix& background,
                                      std::size_t k) {
  const std::size_t n0 = background.rows();
  require(k >= 1, ErrorCode::invalid_argument, "K must be >= 1");
  require(k <= n0, ErrorCode::invalid_argument, "K exceeds the number of background points");
  std::vector<std::pair<double, std::size_t>> dist(n0);
  for (std::size_t w = 0; w < n0; ++w) dist[w] = {simd::squared_distance(center, background.row(w)), w};
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

double knn_background_radius(std::span<const double> center, const Matrix& background, std::size_t k) {
  double sum = 0.0;
  for (std::size_t w : nearest_rows(center, background, k)) {
    sum += std::sqrt(simd::squared_distance(center, background.row(w)));
  }
  return sum / static_cast<double>(k);
}

void LagoModel::prepare() {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::invalid_argument, "alpha must be positive");
  const std::size_t n1 = centers.rows(), d = dim();
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  inv_scale = Matrix(n1, d);
  log_weight.assign(n1, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    double log_det = 0.0, log_det_scaled = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double r = radius(i, j);
      log_det += std::log(r);
      log_det_scaled += std::log(alpha * r);
      inv_scale(i, j) = 1.0 / (alpha * r);
    }
    log_weight[i] = log_det - static_cast<double>(d) * half_log_2pi - log_det_scaled;
  }
}

LagoModel fit_lago(const Dataset& ds, const LagoOptions& options) {
  require(ds.kind == ResponseKind::class_label, ErrorCode::invalid_argument, "LAGO needs class labels");
  std::vector<std::size_t> rare, background;
  for (std::size_t i = 0; i < ds.n(); ++i) (ds.label(i) > 0 ? rare : background).push_back(i);
  require(!rare.empty(), ErrorCode::invalid_argument, "rare class is empty");
  require(options.k >= 1 && options.k <= background.size(), ErrorCode::invalid_argument,
          "K must lie in [1, number of background points]");

  const std::size_t d = ds.d();
  double widest = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double lo = ds.features(0, j), hi = lo;
    for (std::size_t i = 1; i < ds.n(); ++i) {
      lo = std::min(lo, ds.features(i, j));
      hi = std::max(hi, ds.features(i, j));
    }
    widest = std::max(widest, hi - lo);
  }

  LagoModel model;
  model.variant = options.variant;
  model.k = options.k;
  model.alpha = options.alpha;
  model.r_floor = widest > 0.0 ? 1e-9 * widest : 1e-9;
  model.centers = ds.features.select_rows(rare);
  const Matrix bg = ds.features.select_rows(background);
  const bool spherical = options.variant == LagoVariant::spherical;
  model.radii = Matrix(rare.size(), spherical ? 1 : d);

  parallel_for(rare.size(), [&](std::size_t c) {
    auto center = model.centers.row(c);
    const auto nn = nearest_rows(center, bg, options.k);
    if (spherical) {
      double sum = 0.0;
      for (std::size_t w : nn) sum += std::sqrt(simd::squared_distance(center, bg.row(w)));
      model.radii(c, 0) = std::max(sum / static_cast<double>(options.k), model.r_floor);
    } else {
      for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t w : nn) sum += std::abs(center[j] - bg(w, j));
        model.radii(c, j) = std::max(sum / static_cast<double>(options.k), model.r_floor);
      }
    }
  });
  model.prepare();
  return model;
}

double score(const LagoModel& model, std::span<const double> x) {
  require(x.size() == model.dim(), ErrorCode::dimension_mismatch, "query differs in dimension");
  double total = 0.0;
  for (std::size_t i = 0; i < model.centers.rows(); ++i) {
    double q;
    if (model.variant == LagoVariant::spherical) {
      const double s = model.inv_scale(i, 0);
      q = simd::squared_distance(x, model.centers.row(i)) * (s * s);
    } else {
      q = simd::scaled_squared_distance(x, model.centers.row(i), model.inv_scale.row(i));
    }
    total += std::exp(model.log_weight[i] - 0.5 * q);
  }
  return total;
}

std::vector<double> score(const LagoModel& model, const Matrix& x) {
  std::vector<double> out(x.rows());
  parallel_for(x.rows(), [&](std::size_t i) { out[i] = score(model, x.row(i)); });
  return out;
}

std::string Ranking::to_csv() const {
  std::vector<std::size_t> rank_of(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = r + 1;
  csv::Writer w({"row_id", "score", "rank"});
  for (std::size_t i = 0; i < scores.size(); ++i) w.row(i, scores[i], rank_of[i]);
  return w.text();
}

Ranking rank(const LagoModel& model, const Matrix& x_new) {
  Ranking r;
  r.scores = score(model, x_new);
  r.order = ranking_order(r.scores);
  return r;
}

std::string AlphaTuning::to_csv() const {
  csv::Writer w({"alpha", "mean_ap"});
  for (std::size_t a = 0; a < alphas.size(); ++a) w.row(alphas[a], mean_ap[a]);
  return w.text();
}

std::vector<double> default_alpha_grid(std::size_t points) {
  std::vector<double> grid;
  if (points == 1) return {1.0};
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(std::pow(10.0, -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(points - 1)));
  }
  return grid;
}

AlphaTuning tune_alpha(const Dataset& ds, const LagoOptions& base, const std::vector<double>& alphas,
                       std::size_t folds, std::uint64_t seed) {
  require(!alphas.empty(), ErrorCode::invalid_argument, "alpha grid is empty");
  require(folds >= 2, ErrorCode::invalid_argument, "tuning needs at least two folds");
  const FoldPlan plan = make_fold_plan(ds.n(), folds, seed);

  AlphaTuning out;
  out.alphas = alphas;
  out.fold_ap.assign(folds, {});
  parallel_for(folds, [&](std::size_t f) {
    const Dataset train = ds.subset(plan.train_rows(f));
    const Dataset test = ds.subset(plan.test_rows(f));
    std::size_t train_rare = 0, test_rare = 0;
    for (double y : train.response) train_rare += y > 0.0;
    for (double y : test.response) test_rare += y > 0.0;
    if (train_rare == 0 || test_rare == 0 || train.n() - train_rare < base.k) return;
    LagoOptions opt = base;
    opt.alpha = alphas.front();
    LagoModel model = fit_lago(train, opt);
    std::vector<double> ap(alphas.size());
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      model.set_alpha(alphas[a]);
      ap[a] = average_precision(score(model, test.features), test.response);
    }
    out.fold_ap[f] = std::move(ap);
  });

  out.mean_ap.assign(alphas.size(), 0.0);
  std::size_t used = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    if (out.fold_ap[f].empty()) {
      out.skipped_folds.push_back(f);
      continue;
    }
    ++used;
    for (std::size_t a = 0; a < alphas.size(); ++a) out.mean_ap[a] += out.fold_ap[f][a];
  }
  require(used > 0, ErrorCode::degenerate, "no fold contained rare examples on both sides");
  for (double& m : out.mean_ap) m /= static_cast<double>(used);
  std::size_t best = 0;
  for (std::size_t a = 1; a < alphas.size(); ++a)
    if (out.mean_ap[a] > out.mean_ap[best]) best = a;
  out.best_alpha = alphas[best];
  return out;
}

}  // namespace rarekit
