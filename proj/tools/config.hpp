#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rarekit::cli {

// Flat key=value settings. Blank lines and lines starting with '#' are
// ignored; whitespace around keys and values is trimmed.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  // Sorted key=value lines.
  std::string format() const;

  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  void erase(const std::string& key) { entries_.erase(key); }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  const std::string& text(const std::string& key) const;
  bool empty(const std::string& key) const { return text(key).empty(); }
  double number(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::uint64_t seed(const std::string& key) const;
  bool flag(const std::string& key) const;
  // Comma separated; "a:b" in count lists expands to the inclusive range.
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::size_t> counts(const std::string& key) const;

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace rarekit::cli
