#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rarekit/matrix.hpp"

namespace rarekit {

enum class ResponseKind { class_label, real };

// Row-aligned predictors and response. Class labels are stored as -1.0/+1.0.
struct Dataset {
  Matrix features;
  std::vector<double> response;
  std::vector<std::string> feature_names;
  std::string response_name = "y";
  ResponseKind kind = ResponseKind::class_label;

  std::size_t n() const noexcept { return features.rows(); }
  std::size_t d() const noexcept { return features.cols(); }

  int label(std::size_t i) const noexcept { return response[i] > 0.0 ? 1 : -1; }

  // Checks every invariant; throws rarekit::Error on the first violation.
  void validate() const;

  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset with_columns(std::span<const std::size_t> cols) const;
};

// Builds feature names x1..xd when none are given.
Dataset make_dataset(Matrix features, std::vector<double> response,
                     ResponseKind kind = ResponseKind::class_label,
                     std::vector<std::string> names = {});

// Maps raw response values to {-1,+1}; an empty coding keeps the response
// real-valued.
struct LabelCoding {
  std::vector<std::pair<double, int>> mapping;

  // 0 -> -1, 1 -> +1, and the identity on {-1, +1}.
  static LabelCoding binary_default() { return {{{0.0, -1}, {1.0, 1}, {-1.0, -1}}}; }
  static LabelCoding real() { return {}; }

  bool is_real() const noexcept { return mapping.empty(); }
};

// Relative paths that do not exist are retried under $RAREKIT_DATA_DIR.
std::filesystem::path resolve_data_path(const std::filesystem::path& path);

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const LabelCoding& coding = LabelCoding::binary_default());

// Every column of an unlabelled CSV as features.
Matrix load_features(const std::filesystem::path& path, std::vector<std::string>* names = nullptr);

// Column names of a CSV file's header row.
std::vector<std::string> read_header(const std::filesystem::path& path);

// Features first, response last, shortest round-trip number formatting.
void write_csv(const Dataset& ds, const std::filesystem::path& path);
std::string to_csv_text(const Dataset& ds);

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Uniform unstratified sample of round(train_fraction * n) training rows.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

}  // namespace rarekit
