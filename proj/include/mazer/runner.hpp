#pragma once

// Experiment runner behind the command-line tool: configuration parsing,
// parameter sweeps, stationary distributions, resonance tables, CSV output
// with a JSON metadata sidecar, and the named presets.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mazer/engine.hpp"
#include "mazer/mode_profile.hpp"
#include "mazer/photon_statistics.hpp"

namespace mazer {

using Json = nlohmann::json;

// Accepts a JSON number or a string such as "2.5", "100pi", "99*pi",
// "pi/1000" or "3pi/2". Throws std::invalid_argument otherwise.
double parse_scalar(const Json& value);

struct Grid {
  double from;
  double to;
  double step;

  // from, from + step, ... up to `to` (inclusive within 1e-9 step).
  [[nodiscard]] std::vector<double> points() const;
  void validate() const;
};

struct SweepConfig {
  std::vector<ModeProfile> profiles{ModeProfile::sinusoidal()};
  double k_over_kappa0 = 0.01;
  Grid kappa0_l{};
  std::vector<FieldState> fields{FieldState::number(0)};
  std::vector<std::string> quantities{"Pem"};  // Pem, T, Te, Tf, Re, Rf
  Engine engine = Engine::Auto;
  bool force_exact = false;
  unsigned threads = 0;
  int spot_checks = 10;

  static SweepConfig from_json(const Json& j);
  [[nodiscard]] Json to_json() const;
};

enum class GainModel { Scattering, Conventional, Zero };

struct SteadyStateConfig {
  ModeProfile profile = ModeProfile::mesa();
  double k_over_kappa0 = 0.01;
  int at_photons = 0;  // kappa_nL / resonance_index refer to this photon number
  std::optional<double> kappa_n_l;
  std::optional<int> resonance_index;  // m-th well resonance (0-based) instead of kappa_n_l
  double n_ex = 1000;
  double n_b = 1;
  GainModel gain = GainModel::Scattering;
  Engine engine = Engine::Auto;
  bool force_exact = false;
  unsigned threads = 0;

  static SteadyStateConfig from_json(const Json& j);
  [[nodiscard]] Json to_json() const;
};

struct ResonanceConfig {
  ModeProfile profile = ModeProfile::sinusoidal();
  double k_over_kappa_n = 0.01;
  double window_from = 0;
  double window_to = 0;
  Engine engine = Engine::ExactNumeric;
  double points_per_width = 25;
  unsigned threads = 0;

  static ResonanceConfig from_json(const Json& j);
  [[nodiscard]] Json to_json() const;
};

// Cells are stored already formatted so that output is byte-reproducible.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

// Twelve significant digits, "%.12g".
std::string format_number(double x);

struct RunResult {
  Table table;
  Json metadata;
};

RunResult run_sweep(const SweepConfig& config);
RunResult run_steady_state(const SteadyStateConfig& config);
RunResult run_resonances(const ResonanceConfig& config);

// Single point: both channels and all outcome probabilities as JSON.
Json run_scatter(const ModeProfile& profile, double k_l, double kappa_l, int n, Engine engine,
                 bool force_exact);

// Writes <path> (CSV, LF line endings) and <path>.meta.json.
void write_result(const RunResult& result, const std::filesystem::path& path);
void write_csv(const Table& table, std::ostream& out);

std::string_view library_version();

// Preset names: fig1, fig2a, fig2b, fig3, fig4.
std::vector<std::string> preset_names();

struct PresetJob {
  std::string file;  // output file name inside the output directory
  Json config;       // includes "command"
};

std::vector<PresetJob> preset_jobs(const std::string& name);

// Dispatches on config["command"] ("sweep" | "steady-state" | "resonances").
RunResult run_config(const Json& config);

}  // namespace mazer
