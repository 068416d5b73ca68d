#include "cli.hpp"

#include <deque>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "json.hpp"
#include "rarekit/csv.hpp"
#include "rarekit/error.hpp"
#include "rarekit/parallel.hpp"
#include "rarekit/simd.hpp"

namespace rarekit::cli {

namespace {

constexpr const char* kManifest = "manifest.txt";

// Flag values for one leaf command; CLI11 writes into `values`.
struct Leaf {
  const Command* command = nullptr;
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

Config resolve(const Command& cmd, const Config& file, const std::map<std::string, std::string>& flags) {
  Config cfg;
  for (const auto& s : cmd.settings) cfg.set(s.key, s.fallback);
  for (const auto& [key, value] : file.entries()) {
    require(cfg.has(key), ErrorCode::invalid_argument,
            "unknown setting '" + key + "' for command '" + cmd.name + "'");
    cfg.set(key, value);
  }
  for (const auto& [key, value] : flags) cfg.set(key, value);
  return cfg;
}

void execute(const Command& cmd, const Config& cfg, std::ostream& out) {
  Context ctx(cfg.text("out"), out);
  Config manifest = cfg;
  manifest.set("command", cmd.name);
  ctx.save(kManifest, manifest.format());
  cmd.run(cfg, ctx);
}

void apply_execution(int threads, const std::string& simd_name) {
  if (threads > 0) set_worker_count(static_cast<std::size_t>(threads));
  if (simd_name.empty() || simd_name == "auto") return;
  for (simd::Isa isa : {simd::Isa::scalar, simd::Isa::avx2, simd::Isa::neon}) {
    if (simd_name == simd::isa_name(isa)) {
      simd::force_isa(isa);
      return;
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown SIMD level: " + simd_name);
}

std::string option_names(const std::string& key) {
  std::string names = "--" + key;
  if (key.find('_') != std::string::npos) {
    std::string dashed = key;
    for (char& ch : dashed)
      if (ch == '_') ch = '-';
    names += ",--" + dashed;
  }
  return names;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rarekit: kernel methods, rare-class ranking, ensembles and variable selection"};
  app.name("rarekit");
  app.require_subcommand(1);
  int threads = 0;
  std::string simd_name = "auto";
  app.add_option("--threads", threads, "worker threads (0 keeps RAREKIT_THREADS or the hardware count)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--simd", simd_name, "kernel implementation: auto, scalar, avx2 or neon");

  std::deque<Leaf> leaves;
  std::map<std::string, CLI::App*> groups;
  for (const auto& cmd : commands()) {
    CLI::App* parent = &app;
    std::string leaf_name = cmd.name;
    if (const auto space = cmd.name.find(' '); space != std::string::npos) {
      const std::string group = cmd.name.substr(0, space);
      leaf_name = cmd.name.substr(space + 1);
      auto& g = groups[group];
      if (!g) {
        g = app.add_subcommand(group, group + " commands");
        g->require_subcommand(1);
      }
      parent = g;
    }
    Leaf& leaf = leaves.emplace_back();
    leaf.command = &cmd;
    leaf.app = parent->add_subcommand(leaf_name, cmd.help);
    leaf.app->set_help_flag("--help", "print this help message and exit");  // -h would clash with --h
    leaf.app->add_option("--config", leaf.config_path, "key=value settings file (flags override it)");
    for (const auto& s : cmd.settings) {
      std::string help = s.help;
      help += s.fallback.empty() ? " [default: empty]" : " [default: " + s.fallback + "]";
      leaf.options[s.key] = leaf.app->add_option(option_names(s.key), leaf.values[s.key], help);
    }
  }

  std::string replay_manifest;
  std::string replay_out;
  CLI::App* replay = app.add_subcommand("replay", "re-run a command from its manifest.txt");
  replay->add_option("manifest", replay_manifest, "manifest file written by an earlier run")->required();
  replay->add_option("--out", replay_out, "output directory (default: the manifest's)");

  if (args.empty()) {
    err << app.help();
    return 2;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_execution(threads, simd_name);
    if (replay->parsed()) {
      Config manifest = Config::load(replay_manifest);
      const std::string name = manifest.text("command");
      const Command* cmd = find_command(name);
      require(cmd != nullptr, ErrorCode::invalid_argument, "manifest names an unknown command: " + name);
      manifest.erase("command");
      std::map<std::string, std::string> flags;
      if (!replay_out.empty()) flags["out"] = replay_out;
      execute(*cmd, resolve(*cmd, manifest, flags), out);
      return 0;
    }
    for (auto& leaf : leaves) {
      if (!leaf.app->parsed()) continue;
      const Config file = leaf.config_path.empty() ? Config{} : Config::load(leaf.config_path);
      std::map<std::string, std::string> flags;
      for (const auto& [key, opt] : leaf.options)
        if (opt->count() > 0) flags[key] = leaf.values[key];
      execute(*leaf.command, resolve(*leaf.command, file, flags), out);
      return 0;
    }
    err << app.help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed model file: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rarekit::cli
