#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rarekit/matrix.hpp"

namespace rarekit::csv {

using Record = std::vector<std::string>;

// RFC-4180 style: comma separated, optional double quotes with "" escapes,
// quoted fields may span lines. CRLF and LF line endings both accepted.
std::vector<Record> parse(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

// Locale-independent, shortest representation that round-trips.
std::string format_double(double v);

// Decimal-point numeric parse of a whole cell (surrounding blanks allowed).
// Returns nullopt for anything else, including nan/inf.
std::optional<double> parse_double(std::string_view cell);

std::string quote_if_needed(std::string_view field);

// Incremental text builder for CSV outputs.
class Writer {
 public:
  explicit Writer(const std::vector<std::string>& header);

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((append(cells, first)), ...);
    text_ += '\n';
  }

  void row(const std::vector<double>& cells);

  const std::string& text() const noexcept { return text_; }
  void save(const std::filesystem::path& path) const { write_file(path, text_); }

 private:
  void append(double v, bool& first) { sep(first), text_ += format_double(v); }
  void append(int v, bool& first) { sep(first), text_ += std::to_string(v); }
  void append(long v, bool& first) { sep(first), text_ += std::to_string(v); }
  void append(long long v, bool& first) { sep(first), text_ += std::to_string(v); }
  void append(unsigned v, bool& first) { sep(first), text_ += std::to_string(v); }
  void append(unsigned long v, bool& first) { sep(first), text_ += std::to_string(v); }
  void append(unsigned long long v, bool& first) { sep(first), text_ += std::to_string(v); }
  void append(std::string_view v, bool& first) { sep(first), text_ += quote_if_needed(v); }
  void append(const std::string& v, bool& first) { append(std::string_view(v), first); }
  void append(const char* v, bool& first) { append(std::string_view(v), first); }
  void sep(bool& first) {
    if (!first) text_ += ',';
    first = false;
  }

  std::string text_;
};

void write_matrix(const std::filesystem::path& path, const Matrix& m,
                  const std::vector<std::string>& header);

}  // namespace rarekit::csv
