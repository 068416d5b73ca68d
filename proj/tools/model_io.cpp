#include "model_io.hpp"

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"

namespace rarekit::cli {

namespace {

constexpr const char* kFormat = "rarekit-model";

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", std::move(rows)}};
}

Matrix matrix_from(const Json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& values = j.at("values");
  require(values.size() == rows, ErrorCode::parse, "matrix row count mismatch in model file");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = values[i].get<std::vector<double>>();
    require(row.size() == cols, ErrorCode::parse, "matrix column count mismatch in model file");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = row[c];
  }
  return m;
}

Json tree_json(const DecisionTree& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
  }
  return Json{{"dim", t.dim}, {"nodes", std::move(nodes)}};
}

DecisionTree tree_from(const Json& j) {
  DecisionTree t;
  t.dim = j.at("dim").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    DecisionTree::Node node;
    node.feature = n.at(0).get<int>();
    node.threshold = n.at(1).get<double>();
    node.left = n.at(2).get<std::uint32_t>();
    node.right = n.at(3).get<std::uint32_t>();
    node.label = n.at(4).get<int>();
    require(node.is_leaf() || (node.left < j.at("nodes").size() && node.right < j.at("nodes").size() &&
                               static_cast<std::size_t>(node.feature) < t.dim),
            ErrorCode::parse, "malformed tree node in model file");
    t.nodes.push_back(node);
  }
  require(!t.nodes.empty(), ErrorCode::parse, "empty tree in model file");
  return t;
}

Json kernel_json(const KernelSpec& spec) { return Json{{"kind", to_string(spec.kind)}, {"h", spec.h}}; }

KernelSpec kernel_from(const Json& j) {
  KernelSpec spec;
  spec.kind = parse_kernel_kind(j.at("kind").get<std::string>());
  spec.h = j.at("h").get<double>();
  spec.validate();
  return spec;
}

}  // namespace

Json to_json(const KernelClassifier& m) {
  return Json{{"kernel", kernel_json(m.spec)},
              {"lambda", m.lambda},
              {"beta0", m.beta0},
              {"alphas", m.alphas},
              {"labels", m.labels},
              {"training_features", matrix_json(m.training_features)}};
}

KernelClassifier classifier_from_json(const Json& j) {
  KernelClassifier m;
  m.spec = kernel_from(j.at("kernel"));
  m.lambda = j.at("lambda").get<double>();
  m.beta0 = j.at("beta0").get<double>();
  m.alphas = j.at("alphas").get<std::vector<double>>();
  m.labels = j.at("labels").get<std::vector<double>>();
  m.training_features = matrix_from(j.at("training_features"));
  require(m.alphas.size() == m.labels.size() && m.labels.size() == m.training_features.rows(),
          ErrorCode::parse, "inconsistent classifier model file");
  return m;
}

Json to_json(const LagoModel& m) {
  return Json{{"variant", to_string(m.variant)}, {"k", m.k},
              {"alpha", m.alpha},                {"r_floor", m.r_floor},
              {"centers", matrix_json(m.centers)}, {"radii", matrix_json(m.radii)}};
}

LagoModel lago_from_json(const Json& j) {
  LagoModel m;
  m.variant = parse_lago_variant(j.at("variant").get<std::string>());
  m.k = j.at("k").get<std::size_t>();
  m.alpha = j.at("alpha").get<double>();
  m.r_floor = j.at("r_floor").get<double>();
  m.centers = matrix_from(j.at("centers"));
  m.radii = matrix_from(j.at("radii"));
  const std::size_t want_cols = m.variant == LagoVariant::spherical ? 1 : m.centers.cols();
  require(m.radii.rows() == m.centers.rows() && m.radii.cols() == want_cols, ErrorCode::parse,
          "inconsistent LAGO model file");
  m.prepare();
  return m;
}

Json to_json(const Forest& f) {
  Json trees = Json::array();
  for (const auto& t : f.trees) trees.push_back(tree_json(t));
  return Json{{"m", f.m}, {"seed", f.seed}, {"tree_seeds", f.tree_seeds}, {"trees", std::move(trees)}};
}

Forest forest_from_json(const Json& j) {
  Forest f;
  f.m = j.at("m").get<std::size_t>();
  f.seed = j.at("seed").get<std::uint64_t>();
  f.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
  for (const auto& t : j.at("trees")) f.trees.push_back(tree_from(t));
  return f;
}

Json to_json(const BoostEnsemble& e) {
  Json members = Json::array();
  for (const auto& m : e.members) {
    members.push_back({{"vote", m.vote}, {"error", m.error}, {"tree", tree_json(m.classifier)}});
  }
  const char* stop = e.stop == BoostStop::completed        ? "completed"
                     : e.stop == BoostStop::perfect_member ? "perfect_member"
                                                           : "weak_learner_failed";
  return Json{{"stop", stop}, {"members", std::move(members)}};
}

BoostEnsemble boost_from_json(const Json& j) {
  BoostEnsemble e;
  const auto stop = j.at("stop").get<std::string>();
  e.stop = stop == "perfect_member"        ? BoostStop::perfect_member
           : stop == "weak_learner_failed" ? BoostStop::weak_learner_failed
                                           : BoostStop::completed;
  for (const auto& m : j.at("members")) {
    e.members.push_back({tree_from(m.at("tree")), m.at("vote").get<double>(), m.at("error").get<double>()});
  }
  return e;
}

void save_model(const std::filesystem::path& path, const std::string& type, Json body) {
  Json doc{{"format", kFormat}, {"type", type}, {"model", std::move(body)}};
  csv::write_file(path, doc.dump(1) + "\n");
}

Json load_model(const std::filesystem::path& path, const std::string& type) {
  require(std::filesystem::exists(path), ErrorCode::io, "missing model file: " + path.string());
  Json doc;
  try {
    doc = Json::parse(csv::read_file(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse, "model file is not valid JSON: " + std::string(e.what()));
  }
  require(doc.value("format", "") == kFormat, ErrorCode::parse, "not a rarekit model file: " + path.string());
  require(doc.value("type", "") == type, ErrorCode::invalid_argument,
          "model file holds a " + doc.value("type", std::string("?")) + " model, expected " + type);
  return doc.at("model");
}

}  // namespace rarekit::cli
