// stirap: command-line front end for the simulation campaigns.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "stirap/app/config.hpp"
#include "stirap/app/manifest.hpp"
#include "stirap/app/presets.hpp"

namespace {

using stirap::app::json;

struct CommonFlags {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::optional<std::int64_t> seed;
  std::optional<int> jobs;
  bool plot_script = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  auto* cfg = cmd->add_option("--config", f.config_path, "experiment config (JSON)");
  auto* pre = cmd->add_option("--preset", f.preset, "bundled preset name (see `stirap presets`)");
  cfg->excludes(pre);
  cmd->add_option("--out", f.out_dir, "output directory (overrides config and STIRAP_OUT_DIR)");
  cmd->add_option("--seed", f.seed, "random seed (overrides config)");
  cmd->add_option("--jobs", f.jobs, "worker threads, 0 = all (overrides config and STIRAP_JOBS)");
  cmd->add_flag("--emit-plot-script", f.plot_script, "also write plot_recipe.json");
}

int error_exit(const std::string& kind, const std::string& message, const std::string& key = "") {
  json rec = {{"kind", kind}, {"message", message}};
  if (!key.empty()) rec["key"] = key;
  std::cerr << json{{"error", rec}}.dump() << "\n";
  if (kind == "config") return 2;
  if (kind == "calibration-failed") return 3;
  return 1;
}

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end || n < 0) throw stirap::ConfigError(name, "expected a non-negative integer");
  return static_cast<int>(n);
}

/// `expected` is empty for `run`, which accepts any campaign.
int run(const CommonFlags& f, const std::string& expected) {
  json doc;
  if (!f.preset.empty())
    doc = stirap::app::find_preset(f.preset).config;
  else if (!f.config_path.empty())
    doc = stirap::app::read_json_file(f.config_path);
  else if (!expected.empty())
    doc = json{{"campaign", expected}};
  else
    throw stirap::ConfigError("--config", "a config file or --preset is required");

  if (f.seed) {
    if (*f.seed < 0) throw stirap::ConfigError("--seed", "must be >= 0");
    doc["seed"] = *f.seed;
  }
  stirap::app::ExperimentConfig cfg = stirap::app::parse_config(doc);
  if (!expected.empty() && cfg.campaign != expected)
    throw stirap::ConfigError("campaign", "config is for '" + cfg.campaign + "', not '" + expected + "'");

  std::string out_dir = cfg.out_dir;
  if (const char* env = std::getenv("STIRAP_OUT_DIR"); env && *env) out_dir = env;
  if (!f.out_dir.empty()) out_dir = f.out_dir;
  int jobs = env_int("STIRAP_JOBS", cfg.jobs);
  if (f.jobs) jobs = *f.jobs;
  if (jobs < 0) throw stirap::ConfigError("--jobs", "must be >= 0");

  const auto t0 = std::chrono::steady_clock::now();
  const stirap::app::CampaignOutput out = stirap::app::run_campaign(cfg, jobs);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto rec = stirap::app::write_run(out_dir, cfg, out, wall, f.plot_script);
  std::cout << rec.manifest_path.string() << "\n";
  if (out.failure) return error_exit(out.failure->kind, out.failure->message);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detuned-STIRAP gate laboratory: simulate, calibrate, tomography, sweeps, device report"};
  app.require_subcommand(1);
  app.set_version_flag("--version", stirap::app::tool_version);

  struct Cmd {
    const char* name;
    const char* campaign;
    const char* help;
  };
  const Cmd cmds[] = {{"run", "", "run any config, dispatching on its campaign"},
                      {"simulate", "simulate", "population and eigenbasis-overlap traces"},
                      {"calibrate", "calibrate", "amplitude or phase calibration sweeps"},
                      {"tomography", "tomography", "gate outputs through simulated tomography"},
                      {"sweep", "sweep", "amplitude-detuning maps and robustness curves"},
                      {"device-report", "device-report", "circuit model vs the measured parameter table"}};
  std::vector<CommonFlags> flags(std::size(cmds));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(cmds); ++i) {
    subs.push_back(app.add_subcommand(cmds[i].name, cmds[i].help));
    add_common(subs.back(), flags[i]);
  }

  bool as_json = false;
  std::string show;
  auto* list = app.add_subcommand("presets", "list bundled presets");
  list->add_flag("--json", as_json, "machine-readable catalog");
  list->add_option("--show", show, "print one preset's config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return error_exit("usage", e.what());
  }

  try {
    if (list->parsed()) {
      if (!show.empty()) {
        std::cout << stirap::app::find_preset(show).config.dump(2) << "\n";
        return 0;
      }
      json catalog = json::array();
      for (const auto& p : stirap::app::presets()) {
        if (as_json)
          catalog.push_back({{"name", p.name}, {"campaign", p.config.at("campaign")}, {"citation", p.citation}});
        else
          std::cout << p.name << "\t" << p.config.at("campaign").get<std::string>() << "\t" << p.citation << "\n";
      }
      if (as_json) std::cout << catalog.dump(2) << "\n";
      return 0;
    }
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return run(flags[i], cmds[i].campaign);
  } catch (const stirap::ConfigError& e) {
    return error_exit(e.kind(), e.what(), e.key());
  } catch (const stirap::Error& e) {
    return error_exit(e.kind(), e.what());
  } catch (const std::exception& e) {
    return error_exit("internal", e.what());
  }
  return 1;
}
