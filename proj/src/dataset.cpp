#include "rarekit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/random.hpp"

namespace rarekit {

void Dataset::validate() const {
  require(n() >= 1 && d() >= 1, ErrorCode::invalid_argument, "dataset needs n >= 1 and d >= 1");
  require(response.size() == n(), ErrorCode::dimension_mismatch,
          "response length differs from row count");
  require(feature_names.size() == d(), ErrorCode::dimension_mismatch,
          "feature name count differs from column count");
  std::set<std::string> seen(feature_names.begin(), feature_names.end());
  require(seen.size() == feature_names.size(), ErrorCode::invalid_argument,
          "duplicate feature names");
  for (double v : features.values()) {
    require(std::isfinite(v), ErrorCode::invalid_argument, "non-finite feature value");
  }
  for (double y : response) {
    require(std::isfinite(y), ErrorCode::invalid_argument, "non-finite response value");
    if (kind == ResponseKind::class_label) {
      require(y == 1.0 || y == -1.0, ErrorCode::invalid_argument,
              "class labels must be exactly -1 or +1");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features = features.select_rows(rows);
  out.response.reserve(rows.size());
  for (std::size_t i : rows) out.response.push_back(response[i]);
  out.feature_names = feature_names;
  out.response_name = response_name;
  out.kind = kind;
  return out;
}

Dataset Dataset::with_columns(std::span<const std::size_t> cols) const {
  Dataset out;
  out.features = features.select_cols(cols);
  out.response = response;
  for (std::size_t j : cols) out.feature_names.push_back(feature_names[j]);
  out.response_name = response_name;
  out.kind = kind;
  return out;
}

Dataset make_dataset(Matrix features, std::vector<double> response, ResponseKind kind,
                     std::vector<std::string> names) {
  Dataset ds;
  if (names.empty()) {
    for (std::size_t j = 0; j < features.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
  }
  ds.features = std::move(features);
  ds.response = std::move(response);
  ds.feature_names = std::move(names);
  ds.kind = kind;
  ds.validate();
  return ds;
}

std::filesystem::path resolve_data_path(const std::filesystem::path& path) {
  if (std::filesystem::exists(path) || path.is_absolute()) return path;
  if (const char* dir = std::getenv("RAREKIT_DATA_DIR")) {
    auto candidate = std::filesystem::path(dir) / path;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return path;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const LabelCoding& coding) {
  const auto resolved = resolve_data_path(path);
  require(std::filesystem::exists(resolved), ErrorCode::io, "missing file: " + path.string());
  const auto records = csv::parse(csv::read_file(resolved));
  require(!records.empty(), ErrorCode::parse, "CSV has no header row: " + path.string());

  const auto& header = records.front();
  std::set<std::string> unique(header.begin(), header.end());
  require(unique.size() == header.size(), ErrorCode::parse, "duplicate column names");
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  require(label_it != header.end(), ErrorCode::invalid_argument,
          "label column not found: " + label_column);
  const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());

  const std::size_t rows = records.size() - 1;
  const std::size_t width = header.size();
  require(width >= 2, ErrorCode::parse, "need at least one feature column");

  Dataset ds;
  ds.response_name = label_column;
  ds.kind = coding.is_real() ? ResponseKind::real : ResponseKind::class_label;
  for (std::size_t j = 0; j < width; ++j) {
    if (j != label_col) ds.feature_names.push_back(header[j]);
  }
  ds.features = Matrix(rows, width - 1);
  ds.response.resize(rows);

  for (std::size_t i = 0; i < rows; ++i) {
    const auto& rec = records[i + 1];
    const std::string where = " at data row " + std::to_string(i + 1);
    require(rec.size() == width, ErrorCode::parse, "wrong field count" + where);
    std::size_t out_col = 0;
    for (std::size_t j = 0; j < width; ++j) {
      const auto value = csv::parse_double(rec[j]);
      require(value.has_value(), ErrorCode::parse,
              "non-numeric cell '" + rec[j] + "' in column " + header[j] + where);
      if (j == label_col) {
        if (coding.is_real()) {
          ds.response[i] = *value;
        } else {
          auto hit = std::find_if(coding.mapping.begin(), coding.mapping.end(),
                                  [&](const auto& m) { return m.first == *value; });
          require(hit != coding.mapping.end(), ErrorCode::parse,
                  "label value '" + rec[j] + "' not covered by label coding" + where);
          ds.response[i] = static_cast<double>(hit->second);
        }
      } else {
        ds.features(i, out_col++) = *value;
      }
    }
  }
  ds.validate();
  return ds;
}

Matrix load_features(const std::filesystem::path& path, std::vector<std::string>* names) {
  const auto resolved = resolve_data_path(path);
  require(std::filesystem::exists(resolved), ErrorCode::io, "missing file: " + path.string());
  const auto records = csv::parse(csv::read_file(resolved));
  require(!records.empty(), ErrorCode::parse, "CSV has no header row: " + path.string());
  const auto& header = records.front();
  const std::size_t width = header.size();
  Matrix x(records.size() - 1, width);
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const auto& rec = records[i + 1];
    require(rec.size() == width, ErrorCode::parse,
            "wrong field count at data row " + std::to_string(i + 1));
    for (std::size_t j = 0; j < width; ++j) {
      const auto value = csv::parse_double(rec[j]);
      require(value.has_value(), ErrorCode::parse,
              "non-numeric cell '" + rec[j] + "' in column " + header[j]);
      x(i, j) = *value;
    }
  }
  if (names) *names = header;
  return x;
}

std::vector<std::string> read_header(const std::filesystem::path& path) {
  const auto resolved = resolve_data_path(path);
  require(std::filesystem::exists(resolved), ErrorCode::io, "missing file: " + path.string());
  const auto records = csv::parse(csv::read_file(resolved));
  require(!records.empty(), ErrorCode::parse, "CSV has no header row: " + path.string());
  return records.front();
}

std::string to_csv_text(const Dataset& ds) {
  auto header = ds.feature_names;
  header.push_back(ds.response_name);
  csv::Writer w(header);
  std::vector<double> row(ds.d() + 1);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    auto r = ds.features.row(i);
    std::copy(r.begin(), r.end(), row.begin());
    row.back() = ds.response[i];
    w.row(row);
  }
  return w.text();
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  csv::write_file(path, to_csv_text(ds));
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  require(spec.train_fraction > 0.0 && spec.train_fraction < 1.0, ErrorCode::invalid_argument,
          "train fraction must lie in (0, 1)");
  require(n >= 2, ErrorCode::invalid_argument, "split needs at least two rows");
  const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
  require(n_train >= 1 && n_train < n, ErrorCode::degenerate, "split leaves an empty partition");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(order);

  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  const auto idx = split_indices(ds.n(), spec);
  return {ds.subset(idx.train), ds.subset(idx.test)};
}

}  // namespace rarekit
