#include "config.hpp"

#include <charconv>
#include <sstream>

#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"

namespace rarekit::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorCode::invalid_argument,
              "invalid value for " + key + ": '" + value + "' (expected " + expected + ")");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string_view rest(value);
  while (true) {
    const auto comma = rest.find(',');
    parts.emplace_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return parts;
}

bool parse_unsigned(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos && eq > 0, ErrorCode::parse,
            "config line " + std::to_string(line_no) + " is not key=value");
    cfg.set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  require(std::filesystem::exists(path), ErrorCode::io, "missing config file: " + path.string());
  return parse(csv::read_file(path));
}

std::string Config::format() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  return out.str();
}

const std::string& Config::text(const std::string& key) const {
  const auto it = entries_.find(key);
  require(it != entries_.end(), ErrorCode::invalid_argument, "missing setting: " + key);
  return it->second;
}

double Config::number(const std::string& key) const {
  const auto& v = text(key);
  const auto parsed = csv::parse_double(v);
  if (!parsed) bad_value(key, v, "a number");
  return *parsed;
}

std::size_t Config::count(const std::string& key) const {
  const auto& v = text(key);
  std::uint64_t out = 0;
  if (!parse_unsigned(v, out)) bad_value(key, v, "a nonnegative integer");
  return static_cast<std::size_t>(out);
}

std::uint64_t Config::seed(const std::string& key) const {
  const auto& v = text(key);
  std::uint64_t out = 0;
  if (!parse_unsigned(v, out)) bad_value(key, v, "an unsigned 64-bit integer");
  return out;
}

bool Config::flag(const std::string& key) const {
  const auto& v = text(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
  const auto& v = text(key);
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const auto& part : split_list(v)) {
    const auto parsed = csv::parse_double(part);
    if (!parsed) bad_value(key, v, "a comma-separated list of numbers");
    out.push_back(*parsed);
  }
  return out;
}

std::vector<std::size_t> Config::counts(const std::string& key) const {
  const auto& v = text(key);
  std::vector<std::size_t> out;
  if (trim(v).empty()) return out;
  for (const auto& part : split_list(v)) {
    const auto colon = part.find(':');
    std::uint64_t lo = 0, hi = 0;
    if (colon == std::string::npos) {
      if (!parse_unsigned(part, lo)) bad_value(key, v, "a comma-separated list of integers");
      out.push_back(static_cast<std::size_t>(lo));
      continue;
    }
    if (!parse_unsigned(std::string_view(part).substr(0, colon), lo) ||
        !parse_unsigned(std::string_view(part).substr(colon + 1), hi) || lo > hi) {
      bad_value(key, v, "integers or lo:hi ranges");
    }
    for (std::uint64_t x = lo; x <= hi; ++x) out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

}  // namespace rarekit::cli
