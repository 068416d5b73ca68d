#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace rarekit::cli {

struct Setting {
  std::string key;
  std::string fallback;
  std::string help;
};

// Where a command writes its artifacts and progress lines.
class Context {
 public:
  Context(std::filesystem::path out, std::ostream& log) : out_(std::move(out)), log_(log) {}

  const std::filesystem::path& out() const noexcept { return out_; }
  std::ostream& log() { return log_; }
  void save(const std::string& name, const std::string& text);

 private:
  std::filesystem::path out_;
  std::ostream& log_;
};

struct Command {
  std::string name;  // "svm train", "kpca", ...
  std::string help;
  std::vector<Setting> settings;
  std::function<void(const Config&, Context&)> run;
};

const std::vector<Command>& commands();
const Command* find_command(const std::string& name);

}  // namespace rarekit::cli
