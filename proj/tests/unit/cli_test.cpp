#include <sstream>

#include "cli.hpp"
#include "config.hpp"
#include "doctest.h"
#include "model_io.hpp"
#include "rarekit/csv.hpp"
#include "rarekit/parallel.hpp"
#include "rarekit/synth.hpp"
#include "support.hpp"

using namespace rarekit;
using rarekit::cli::Config;
using rarekit::test::TempDir;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read(const std::filesystem::path& p) { return csv::read_file(p); }

}  // namespace

TEST_CASE("config parsing") {
  const Config c = Config::parse("# comment\n  seed = 7 \n\nBs=1,5:7\nname=a=b\n");
  CHECK(c.seed("seed") == 7);
  CHECK(c.counts("Bs") == std::vector<std::size_t>{1, 5, 6, 7});
  CHECK(c.text("name") == "a=b");
  CHECK(c.format() == "Bs=1,5:7\nname=a=b\nseed=7\n");
  CHECK(Config::parse(c.format()).entries() == c.entries());
  CHECK_THROWS_AS(Config::parse("novalue\n"), Error);
  CHECK_THROWS_AS(c.text("missing"), Error);

  Config typed;
  typed.set("x", "2.5");
  typed.set("n", "-1");
  typed.set("b", "yes");
  typed.set("list", "1, 0.5,1e-3");
  CHECK(typed.number("x") == 2.5);
  CHECK_THROWS_AS(typed.count("n"), Error);
  CHECK(typed.flag("b"));
  CHECK(typed.numbers("list") == std::vector<double>{1, 0.5, 1e-3});
  CHECK_THROWS_AS(typed.count("x"), Error);
}

TEST_CASE("model files round-trip") {
  TempDir dir("models");
  const synth::RareMixture mix;
  const Dataset train = mix.sample(300, 1);
  const Dataset query = mix.sample(100, 2);

  SUBCASE("kernel classifier") {
    HingeOptions opt;
    opt.epochs = 5;
    const auto m = train_kernel_hinge(train, KernelSpec::gaussian(0.5), opt);
    cli::save_model(dir / "m.json", "kernel_hinge", cli::to_json(m));
    const auto back = cli::classifier_from_json(cli::load_model(dir / "m.json", "kernel_hinge"));
    CHECK(back.decision(query.features) == m.decision(query.features));
    CHECK_THROWS_AS(cli::load_model(dir / "m.json", "forest"), Error);
  }
  SUBCASE("lago") {
    const auto m = fit_lago(train, {5, 0.7, LagoVariant::elliptical});
    cli::save_model(dir / "m.json", "lago", cli::to_json(m));
    const auto back = cli::lago_from_json(cli::load_model(dir / "m.json", "lago"));
    CHECK(score(back, query.features) == score(m, query.features));
  }
  SUBCASE("forest") {
    const auto f = random_forest(train, {10, 1, 3, true});
    cli::save_model(dir / "m.json", "forest", cli::to_json(f));
    const auto back = cli::forest_from_json(cli::load_model(dir / "m.json", "forest"));
    CHECK(back.trees == f.trees);
  }
  SUBCASE("adaboost") {
    BoostOptions opt;
    opt.rounds = 8;
    const auto e = adaboost(train, opt);
    cli::save_model(dir / "m.json", "adaboost", cli::to_json(e));
    const auto back = cli::boost_from_json(cli::load_model(dir / "m.json", "adaboost"));
    for (std::size_t i = 0; i < query.n(); ++i) CHECK(back.margin(query.features.row(i)) == e.margin(query.features.row(i)));
  }
  SUBCASE("malformed files") {
    csv::write_file(dir / "bad.json", "{not json");
    CHECK_THROWS_AS(cli::load_model(dir / "bad.json", "lago"), Error);
    csv::write_file(dir / "other.json", "{\"format\": \"something\"}");
    CHECK_THROWS_AS(cli::load_model(dir / "other.json", "lago"), Error);
    CHECK_THROWS_AS(cli::load_model(dir / "none.json", "lago"), Error);
  }
}

TEST_CASE("cli usage and errors") {
  const Outcome none = run({});
  CHECK(none.code == 2);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"svm", "train", "--help"}).code == 0);
  CHECK(run({"nosuch"}).code == 2);
  TempDir dir("errors");
  const std::string out = (dir / "o").string();
  CHECK(run({"experiments", "toy", "--bogus", "1", "--out", out}).code == 2);
  const Outcome bad_value = run({"experiments", "toy", "--n", "many", "--out", out});
  CHECK(bad_value.code == 1);
  CHECK(bad_value.err.find("invalid value for n") != std::string::npos);
  const Outcome missing = run({"select", "--data", (dir / "absent.csv").string(), "--out", out});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error:") == 0);
  csv::write_file(dir / "c.txt", "unknown_key=1\n");
  CHECK(run({"experiments", "toy", "--config", (dir / "c.txt").string(), "--out", out}).code == 1);
}

TEST_CASE("select on the toy writes the frequency table and selected set") {
  TempDir dir("select");
  REQUIRE(run({"experiments", "toy", "--out", dir.path().string()}).code == 0);
  const Outcome r = run({"select", "--mode", "universes", "--data", (dir / "toy.csv").string(), "--B", "10",
                         "--generations", "6", "--seed", "1", "--out", (dir / "sel").string()});
  REQUIRE(r.code == 0);
  const std::string freq = read(dir / "sel" / "frequencies.csv");
  CHECK(freq.rfind("variable,frequency,selected\nx1,", 0) == 0);
  CHECK(read(dir / "sel" / "selected.csv").rfind("variable,index\n", 0) == 0);
  CHECK(r.out.find("selected:") != std::string::npos);

  REQUIRE(run({"select", "--mode", "exhaustive", "--data", (dir / "toy.csv").string(), "--truth", "2,5,8",
               "--out", (dir / "ex").string()})
              .code == 0);
  const std::string table = read(dir / "ex" / "subsets.csv");
  CHECK(table.rfind("mask,size,F,group\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1025);
}

TEST_CASE("fig5 sweep output") {
  TempDir dir("fig5");
  REQUIRE(run({"experiments", "fig5", "--Bs", "1,5,10", "--replicates", "3", "--out", dir.path().string()}).code == 0);
  const std::string csv = read(dir / "fig5.csv");
  CHECK(csv.rfind("B,replicate,variable,frequency,selected\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 3 * 10);
}

TEST_CASE("precedence is flags over config over defaults") {
  TempDir dir("prec");
  csv::write_file(dir / "c.txt", "n = 20\nseed = 7\n");
  REQUIRE(run({"experiments", "toy", "--config", (dir / "c.txt").string(), "--seed", "3", "--out",
               dir.path().string()})
              .code == 0);
  const Config manifest = Config::load(dir / "manifest.txt");
  CHECK(manifest.text("command") == "experiments toy");
  CHECK(manifest.count("n") == 20);
  CHECK(manifest.seed("seed") == 3);
  CHECK(manifest.count("d") == 10);
  const Dataset toy = load_csv(dir / "toy.csv", "y", LabelCoding::real());
  CHECK(toy.n() == 20);
  CHECK(toy.features == synth::toy_regression({20, 10, {1, 4, 7}, 1.0}, 3).features);
}

TEST_CASE("train then predict through model files") {
  TempDir dir("flow");
  REQUIRE(run({"experiments", "datasets", "--mixture-n", "300", "--out", dir.path().string()}).code == 0);
  const std::string train = (dir / "mixture_train.csv").string(), test = (dir / "mixture_test.csv").string();
  REQUIRE(run({"forest", "train", "--data", train, "--trees", "15", "--out", (dir / "f").string()}).code == 0);
  const Outcome p = run({"forest", "predict", "--data", test, "--model", (dir / "f" / "model.json").string(),
                         "--out", (dir / "fp").string()});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("errors:") != std::string::npos);
  CHECK(read(dir / "fp" / "predictions.csv").rfind("row_id,predicted,label\n0,", 0) == 0);
  // A model of another kind is rejected.
  CHECK(run({"lago", "rank", "--data", test, "--model", (dir / "f" / "model.json").string(), "--out",
             (dir / "x").string()})
            .code == 1);
}
