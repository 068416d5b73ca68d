#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "rarekit/csv.hpp"
#include "rarekit/metrics.hpp"
#include "rarekit/random.hpp"
#include "rarekit/svm.hpp"
#include "support.hpp"

using namespace rarekit;
using doctest::Approx;

namespace {

Dataset two_clusters(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(2 * per_class, 2);
  std::vector<double> y(2 * per_class);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const double side = i < per_class ? -1.0 : 1.0;
    x(i, 0) = side * 1.5 + 0.2 * rng.normal();
    x(i, 1) = 0.2 * rng.normal();
    y[i] = side;
  }
  return make_dataset(std::move(x), std::move(y));
}

Dataset xor_points() {
  return make_dataset(Matrix::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}}), {1, 1, -1, -1});
}

// Fewest training errors over linear rules sign(w.x + b), scanning directions
// finely and every offset between consecutive projections.
std::size_t best_linear_errors(const Dataset& ds) {
  std::size_t best = ds.n();
  for (int step = 0; step < 3600; ++step) {
    const double angle = 2.0 * std::numbers::pi * step / 3600.0;
    const double w0 = std::cos(angle), w1 = std::sin(angle);
    std::vector<double> proj(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) proj[i] = w0 * ds.features(i, 0) + w1 * ds.features(i, 1);
    std::vector<double> cuts(proj);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> offsets{cuts.front() - 1.0, cuts.back() + 1.0};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) offsets.push_back(0.5 * (cuts[k] + cuts[k + 1]));
    for (double t : offsets) {
      std::size_t errors = 0;
      for (std::size_t i = 0; i < ds.n(); ++i) errors += ((proj[i] - t >= 0.0 ? 1 : -1) != ds.label(i));
      best = std::min(best, errors);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("signed_distance") {
  CHECK(signed_distance({{0, 1}, 0}, std::vector<double>{5, 2}) == 2.0);
  CHECK(signed_distance({{3, 4}, 0}, std::vector<double>{0, 0}) == 0.0);
  CHECK(signed_distance({{3, 4}, -5}, std::vector<double>{1, 1}) == Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(signed_distance({{0, 0}, 1}, std::vector<double>{1, 1}), Error);

  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> beta{rng.normal(), rng.normal(), rng.normal()};
    const std::vector<double> x{rng.normal(), rng.normal(), rng.normal()};
    const double b0 = rng.normal();
    const double s = 0.01 + 10.0 * rng.uniform();
    const std::vector<double> scaled{s * beta[0], s * beta[1], s * beta[2]};
    CHECK(signed_distance({scaled, s * b0}, x) == Approx(signed_distance({beta, b0}, x)).epsilon(1e-12));
  }
}

TEST_CASE("canonical hyperplanes and margins") {
  const Dataset pair = make_dataset(Matrix::from_rows({{1, 0}, {-1, 0}}), {1, -1});
  CHECK(check_canonical({{1, 0}, 0}, pair) == Canonicality::canonical);
  CHECK(margin({{1, 0}, 0}) == 2.0);
  CHECK(check_canonical({{2, 0}, 0}, pair) == Canonicality::separating_not_canonical);
  const Dataset overlap = make_dataset(Matrix::from_rows({{1, 0}, {-1, 0}, {2, 0}}), {1, -1, -1});
  CHECK(check_canonical({{1, 0}, 0}, overlap) == Canonicality::not_separating);
  CHECK(margin({{3, 4}, 0}) == Approx(0.4).epsilon(1e-15));
  CHECK(margin({{0.5, 0}, 0}) == 4.0);
}

TEST_CASE("hinge_objective") {
  const std::vector<double> y{1, -1, 1};
  CHECK(hinge_objective(y, std::vector<double>{1, -2, 3}, 5.0, 0.0) == 0.0);
  CHECK(hinge_objective(y, std::vector<double>{-1, -2, 3}, 5.0, 0.0) == 2.0);
  CHECK(hinge_objective(y, std::vector<double>{1, -2, 3}, 5.0, 0.5) == 2.5);
  CHECK_THROWS_AS(hinge_objective(y, std::vector<double>{1}, 0.0, 0.0), Error);

  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.uniform_index(40);
    const auto labels = test::random_labels(n, rng);
    std::vector<double> f(n);
    for (auto& v : f) v = 2.0 * rng.normal();
    const double norm_sq = rng.uniform() * 10.0, lambda = rng.uniform();
    double expected = lambda * norm_sq;
    for (std::size_t i = 0; i < n; ++i) {
      const double margin_i = labels[i] * f[i];
      if (margin_i < 1.0) expected += 1.0 - margin_i;
    }
    CHECK(hinge_objective(labels, f, norm_sq, lambda) == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("objective is convex along segments in coefficient space") {
  Rng rng(3);
  const Matrix x = test::random_matrix(12, 2, rng);
  const auto labels = test::random_labels(12, rng);
  const Matrix k = gram(KernelSpec::gaussian(0.7), x).values;
  auto objective = [&](const std::vector<double>& c, double b) {
    std::vector<double> f(12, b);
    double pen = 0.0;
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j < 12; ++j) {
        f[i] += k(i, j) * c[j];
        pen += c[i] * k(i, j) * c[j];
      }
    return hinge_objective(labels, f, pen, 0.3);
  };
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(12), b(12), mid(12);
    for (std::size_t i = 0; i < 12; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
      mid[i] = 0.5 * (a[i] + b[i]);
    }
    const double ba = rng.normal(), bb = rng.normal();
    CHECK(objective(mid, 0.5 * (ba + bb)) <= 0.5 * (objective(a, ba) + objective(b, bb)) + 1e-9);
  }
}

TEST_CASE("optimal_offset minimises the hinge sum over the offset") {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.uniform_index(25);
    const auto labels = test::random_labels(n, rng);
    std::vector<double> s(n);
    for (auto& v : s) v = rng.normal();
    auto loss = [&](double b) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += std::max(0.0, 1.0 - labels[i] * (s[i] + b));
      return total;
    };
    // A convex piecewise-linear function attains its minimum at a kink.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, loss(labels[i] - s[i]));
    CHECK(loss(optimal_offset(s, labels)) <= best + 1e-12);
  }
}

TEST_CASE("solver names and the gamma mapping") {
  CHECK(lambda_from_gamma(10.0) == 0.05);
  CHECK(parse_hinge_solver("dual") == HingeSolver::dual_coordinate);
  CHECK(parse_hinge_solver("sgd") == HingeSolver::subgradient);
  CHECK(to_string(HingeSolver::subgradient) == "subgradient");
  CHECK_THROWS_AS(parse_hinge_solver("smo"), Error);
}

TEST_CASE("separable clusters are classified perfectly by both solvers") {
  const Dataset train = two_clusters(30, 1);
  const Dataset test = two_clusters(50, 2);
  for (HingeSolver solver : {HingeSolver::dual_coordinate, HingeSolver::subgradient}) {
    CAPTURE(to_string(solver));
    HingeOptions opt;
    opt.lambda = 0.05;
    opt.solver = solver;
    opt.epochs = 50;
    opt.seed = 7;
    const KernelClassifier model = train_kernel_hinge(train, KernelSpec::linear(), opt);
    CHECK(misclassification(model.predict(test.features), test.response) == 0);
    REQUIRE(model.objective_history.size() == opt.epochs + 1);
    for (std::size_t e = 1; e < model.objective_history.size(); ++e)
      CHECK(model.objective_history[e] <= model.objective_history[e - 1]);
  }
}

TEST_CASE("XOR needs a nonlinear kernel") {
  const Dataset ds = xor_points();
  CHECK(best_linear_errors(ds) == 1);
  HingeOptions opt;
  opt.lambda = 0.01;
  opt.epochs = 100;
  opt.seed = 1;
  const auto gaussian = train_kernel_hinge(ds, KernelSpec::gaussian(1.0), opt);
  CHECK(misclassification(gaussian.predict(ds.features), ds.response) == 0);
  const auto linear = train_kernel_hinge(ds, KernelSpec::linear(), opt);
  CHECK(misclassification(linear.predict(ds.features), ds.response) >= 1);
}

TEST_CASE("training is invariant to row permutation under a matching schedule") {
  Rng rng(6);
  const Matrix x = test::random_matrix(20, 2, rng);
  const auto y = test::random_labels(20, rng);
  const Dataset ds = make_dataset(x, y);
  std::vector<std::size_t> perm(20);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(perm);
  const Dataset permuted = ds.subset(perm);
  std::vector<std::size_t> where(20);
  for (std::size_t i = 0; i < 20; ++i) where[perm[i]] = i;

  HingeOptions a;
  a.lambda = 0.1;
  a.epochs = 10;
  for (std::size_t e = 0; e < a.epochs; ++e) {
    std::vector<std::size_t> order(20);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng(derive_seed(3, {static_cast<std::uint32_t>(e)})).shuffle(order);
    a.schedule.push_back(order);
  }
  HingeOptions b = a;
  for (auto& order : b.schedule)
    for (auto& i : order) i = where[i];

  const auto ma = train_kernel_hinge(ds, KernelSpec::gaussian(0.5), a);
  const auto mb = train_kernel_hinge(permuted, KernelSpec::gaussian(0.5), b);
  const Matrix queries = test::random_matrix(30, 2, rng);
  const auto fa = ma.decision(queries);
  const auto fb = mb.decision(queries);
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(fa[i] == Approx(fb[i]).epsilon(1e-9));
}

TEST_CASE("training argument checks") {
  const Dataset ds = xor_points();
  HingeOptions opt;
  opt.epochs = 0;
  CHECK_THROWS_AS(train_kernel_hinge(ds, KernelSpec::linear(), opt), Error);
  opt.epochs = 2;
  opt.lambda = 0.0;
  CHECK_THROWS_AS(train_kernel_hinge(ds, KernelSpec::linear(), opt), Error);
  opt.lambda = 1.0;
  opt.schedule = {{0, 1, 2, 3}};
  CHECK_THROWS_AS(train_kernel_hinge(ds, KernelSpec::linear(), opt), Error);
  const Dataset real = make_dataset(Matrix(2, 1), {0.5, 2.0}, ResponseKind::real);
  CHECK_THROWS_AS(train_kernel_hinge(real, KernelSpec::linear(), {}), Error);
}

TEST_CASE("a 1x1 sensitivity grid matches a direct fit") {
  const Dataset train = two_clusters(20, 3);
  Dataset test = two_clusters(30, 4);
  test.response[0] = -test.response[0];  // one guaranteed error
  const auto grid = sensitivity_grid(train, test, {10.0}, {0.5}, 20, 9);
  HingeOptions opt;
  opt.lambda = lambda_from_gamma(10.0);
  opt.epochs = 20;
  opt.seed = derive_seed(9, {0, 0});
  const auto model = train_kernel_hinge(train, KernelSpec::gaussian(0.5), opt);
  const double direct = static_cast<double>(misclassification(model.predict(test.features), test.response));
  CHECK(grid.errors(0, 0) == direct);
  CHECK(direct >= 1.0);
  CHECK(grid.to_csv() == "gamma,h,errors\n10,0.5," + csv::format_double(direct) + "\n");
}

TEST_CASE("on separable clusters h matters more than gamma") {
  const Dataset train = two_clusters(30, 5);
  const Dataset test = two_clusters(100, 6);
  const std::vector<double> gammas{1, 10, 100, 1000};
  const std::vector<double> hs{1e-3, 1e-2, 1e-1, 1, 10, 100, 1000};
  const auto grid = sensitivity_grid(train, test, gammas, hs, 50, 1);
  // Best h column, then spread along each axis through the best cell.
  std::size_t bg = 0, bh = 0;
  for (std::size_t g = 0; g < gammas.size(); ++g)
    for (std::size_t h = 0; h < hs.size(); ++h)
      if (grid.errors(g, h) < grid.errors(bg, bh)) bg = g, bh = h;
  double h_lo = 1e300, h_hi = -1e300, g_lo = 1e300, g_hi = -1e300;
  for (std::size_t h = 0; h < hs.size(); ++h) {
    h_lo = std::min(h_lo, grid.errors(bg, h));
    h_hi = std::max(h_hi, grid.errors(bg, h));
  }
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    g_lo = std::min(g_lo, grid.errors(g, bh));
    g_hi = std::max(g_hi, grid.errors(g, bh));
  }
  CHECK(h_hi - h_lo > g_hi - g_lo);
}
