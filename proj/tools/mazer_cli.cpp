// Command-line front end for the mazer scattering library.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mazer/resonance.hpp"
#include "mazer/runner.hpp"

namespace {

using mazer::Json;

struct CommonOptions {
  std::string config_path;
  std::string out;
  std::string engine;
  int threads = -1;
  bool force_exact = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, CommonOptions& o, const std::string& out_help) {
  app->add_option("-c,--config", o.config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  app->add_option("-o,--out", o.out, out_help);
  app->add_option("--engine", o.engine, "exact | semiclassical | auto")
      ->check(CLI::IsMember({"exact", "semiclassical", "auto"}));
  app->add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("--force-exact", o.force_exact,
                "run exact integration even above the per-point step budget");
  app->add_option("--set", o.sets, "override a config entry, KEY=VALUE (dotted keys allowed)");
}

Json parse_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return text;
  }
}

void apply_overrides(Json& config, const CommonOptions& o) {
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--set expects KEY=VALUE, got '" + s + "'");
    }
    std::string pointer = "/" + s.substr(0, eq);
    for (auto& c : pointer) {
      if (c == '.') c = '/';
    }
    config[Json::json_pointer(pointer)] = parse_value(s.substr(eq + 1));
  }
  if (!o.engine.empty()) config["engine"] = o.engine;
  if (o.threads >= 0) config["threads"] = o.threads;
  if (o.force_exact) config["force_exact"] = true;
}

Json load_config(const CommonOptions& o, const std::string& command) {
  Json config = Json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot read " + o.config_path);
    config = Json::parse(in, nullptr, true, true);
  }
  if (config.contains("command") && config["command"] != command) {
    throw std::invalid_argument("config is for '" + config["command"].get<std::string>() +
                                "', not '" + command + "'");
  }
  config["command"] = command;
  apply_overrides(config, o);
  return config;
}

void report(const mazer::RunResult& result, const std::filesystem::path& path) {
  mazer::write_result(result, path);
  std::cerr << "wrote " << path.string() << " (" << result.table.rows.size() << " rows) and "
            << path.string() << ".meta.json\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering of ultracold two-level atoms by a cavity mode, with micromaser "
               "photon statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mazer::library_version()));

  // scatter
  auto* scatter = app.add_subcommand("scatter", "single point: both channels and all outcomes");
  std::string profile_name = "sinusoidal";
  std::string kl_text;
  std::string kappal_text;
  int photons = 0;
  std::string scatter_engine = "auto";
  bool scatter_force = false;
  scatter->add_option("--profile", profile_name, "mesa | sinusoidal");
  scatter->add_option("--kL", kl_text, "incident wavenumber times L (accepts e.g. 3pi)")
      ->required();
  scatter->add_option("--kappaL", kappal_text, "vacuum coupling wavenumber times L")->required();
  scatter->add_option("-n,--photons", photons, "photons in the cavity")
      ->check(CLI::NonNegativeNumber);
  scatter->add_option("--engine", scatter_engine, "exact | semiclassical | auto")
      ->check(CLI::IsMember({"exact", "semiclassical", "auto"}));
  scatter->add_flag("--force-exact", scatter_force, "ignore the exact-integration step budget");

  CommonOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "probability curves over a kappa0 L grid");
  add_common(sweep, sweep_opts, "CSV output path (default sweep.csv)");

  CommonOptions steady_opts;
  auto* steady =
      app.add_subcommand("steady-state", "stationary micromaser photon distribution");
  add_common(steady, steady_opts, "CSV output path (default steady-state.csv)");

  CommonOptions res_opts;
  auto* res = app.add_subcommand("resonances", "locate well-channel transmission resonances");
  add_common(res, res_opts, "CSV output path (default resonances.csv)");

  CommonOptions preset_opts;
  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "regenerate a named dataset");
  preset->add_option("name", preset_name, "fig1 | fig2a | fig2b | fig3 | fig4")
      ->required()
      ->check(CLI::IsMember(mazer::preset_names()));
  add_common(preset, preset_opts, "output directory (default .)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scatter->parsed()) {
      const Json j = mazer::run_scatter(mazer::ModeProfile::from_name(profile_name),
                                        mazer::parse_scalar(Json(kl_text)),
                                        mazer::parse_scalar(Json(kappal_text)), photons,
                                        mazer::engine_from_name(scatter_engine), scatter_force);
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (preset->parsed()) {
      const std::filesystem::path dir = preset_opts.out.empty() ? "." : preset_opts.out;
      for (const auto& job : mazer::preset_jobs(preset_name)) {
        Json config = job.config;
        apply_overrides(config, preset_opts);
        report(mazer::run_config(config), dir / job.file);
      }
      return 0;
    }
    const struct {
      CLI::App* app;
      CommonOptions* opts;
      const char* command;
    } runs[] = {{sweep, &sweep_opts, "sweep"},
                {steady, &steady_opts, "steady-state"},
                {res, &res_opts, "resonances"}};
    for (const auto& r : runs) {
      if (!r.app->parsed()) continue;
      const Json config = load_config(*r.opts, r.command);
      const std::string out = r.opts->out.empty() ? std::string(r.command) + ".csv" : r.opts->out;
      report(mazer::run_config(config), out);
      return 0;
    }
  } catch (const mazer::EngineRefused& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
