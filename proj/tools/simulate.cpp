// simulate: run a preset sweep or a single configuration and write CSV/SVG results.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "frsim/config.hpp"
#include "frsim/experiment.hpp"

namespace {

int report_config_error(const frsim::ConfigError& e) {
  if (e.diagnostics().empty()) {
    std::cerr << "error: " << e.what() << '\n';
  } else {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << frsim::format_diagnostic(d) << '\n';
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for smart-helper-aided fog radio access networks"};

  std::string config_path;
  std::string preset;
  std::string out_dir = "results";
  std::string scheme_text;
  std::string helper_text;
  std::uint64_t seed = 0;
  int runs = 0;
  int threads = 0;
  bool validate_only = false;
  bool list_presets = false;

  app.add_option("--config", config_path, "Configuration file (flat key: value YAML)")->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "Experiment preset (see --list-presets)");
  app.add_option("--seed", seed, "Master seed; overrides rng_seed");
  app.add_option("--runs", runs, "Monte Carlo runs per sweep point")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--scheme", scheme_text, "Caching scheme: learned|random|mpc|hybrid20|hybrid50|uniform");
  app.add_option("--helper", helper_text, "Helper kind: sh|ce_relay|none");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_flag("--validate", validate_only, "Check the configuration and exit");
  app.add_flag("--list-presets", list_presets, "Print preset names and exit");

  CLI11_PARSE(app, argc, argv);

  if (list_presets) {
    for (const auto& n : frsim::preset_names()) std::cout << n << '\n';
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "error: --config is required\n" << app.help();
    return 2;
  }

  auto loaded = frsim::validate_config(config_path);
  if (!loaded.config) {
    for (const auto& d : loaded.diagnostics) std::cerr << config_path << ": " << frsim::format_diagnostic(d) << '\n';
    return 2;
  }
  frsim::SimConfig cfg = *loaded.config;
  if (app.count("--seed")) cfg.rng_seed = seed;
  if (!scheme_text.empty()) {
    auto s = frsim::parse_scheme(scheme_text);
    if (!s) {
      std::cerr << "error: unknown scheme '" << scheme_text << "'\n";
      return 2;
    }
    cfg.caching_scheme = *s;
  }
  if (!helper_text.empty()) {
    auto h = frsim::parse_helper_kind(helper_text);
    if (!h) {
      std::cerr << "error: unknown helper kind '" << helper_text << "'\n";
      return 2;
    }
    cfg.helper_kind = *h;
  }
  if (auto issues = frsim::check_config(cfg); !issues.empty()) {
    for (const auto& d : issues) std::cerr << "error: " << frsim::format_diagnostic(d) << '\n';
    return 2;
  }
  if (validate_only) {
    std::cout << config_path << ": ok\n";
    return 0;
  }

  frsim::Experiment exp;
  if (!preset.empty()) {
    auto p = frsim::make_preset(preset, cfg);
    if (!p) {
      std::cerr << "error: unknown preset '" << preset << "'\n";
      return 2;
    }
    exp = std::move(*p);
    // Explicit flags narrow the preset's axes.
    if (!scheme_text.empty()) exp.schemes = {cfg.caching_scheme};
    if (!helper_text.empty()) exp.helpers = {cfg.helper_kind};
  } else {
    exp.name = "single";
    exp.base = cfg;
    exp.master_seed = cfg.rng_seed;
  }
  if (runs > 0) exp.runs_per_point = runs;

  try {
    const auto start = std::chrono::steady_clock::now();
    const auto result = frsim::run_experiment(exp, threads);
    frsim::write_results(result, out_dir);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    std::cout << exp.name << ": " << result.summaries.size() << " points x " << exp.runs_per_point << " runs in "
              << took.count() << " s -> " << out_dir << '\n';
  } catch (const frsim::ConfigError& e) {
    return report_config_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
