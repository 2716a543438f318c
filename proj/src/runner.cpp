#include "mazer/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>

#include "mazer/mesa.hpp"
#include "mazer/resonance.hpp"
#include "mazer/semiclassical.hpp"

#ifndef MAZER_VERSION
#define MAZER_VERSION "0.0.0"
#endif

namespace mazer {

namespace {

using std::numbers::pi;

double parse_term(const std::string& term, const std::string& whole) {
  auto fail = [&]() -> double {
    throw std::invalid_argument("cannot parse number '" + whole + "'");
  };
  if (term.empty()) return fail();
  std::string body = term;
  double factor = 1.0;
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
    factor = pi;
    body.resize(body.size() - 2);
    if (!body.empty() && body.back() == '*') body.pop_back();
    if (body.empty()) return factor;
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(body, &used);
  } catch (const std::exception&) {
    return fail();
  }
  if (used != body.size()) return fail();
  return v * factor;
}

std::string lower_compact(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

double scalar_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? parse_scalar(j.at(key)) : fallback;
}

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

Json field_to_json(const FieldState& f) {
  switch (f.kind) {
    case FieldState::Kind::Number:
      return {{"kind", "number"}, {"n", static_cast<int>(f.parameter)}};
    case FieldState::Kind::Coherent:
      return {{"kind", "coherent"}, {"mean", f.parameter}};
    default:
      return {{"kind", "thermal"}, {"mean", f.parameter}};
  }
}

FieldState field_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "number") {
    const int n = j.at("n").get<int>();
    if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
    return FieldState::number(n);
  }
  const double mean = parse_scalar(j.at("mean"));
  if (!(mean >= 0)) throw std::invalid_argument("mean photon number must be nonnegative");
  if (kind == "coherent") return FieldState::coherent(mean);
  if (kind == "thermal") return FieldState::thermal(mean);
  throw std::invalid_argument("unknown field kind '" + kind + "'");
}

std::string field_label(const FieldState& f) {
  switch (f.kind) {
    case FieldState::Kind::Number:
      return "n" + std::to_string(static_cast<int>(f.parameter));
    case FieldState::Kind::Coherent:
      return "coh" + format_number(f.parameter);
    default:
      return "th" + format_number(f.parameter);
  }
}

double quantity(const OutcomeProbabilities& o, const std::string& name) {
  if (name == "Pem") return o.emission();
  if (name == "T") return o.transmission();
  if (name == "Te") return o.transmitted_excited;
  if (name == "Tf") return o.transmitted_ground;
  if (name == "Re") return o.reflected_excited;
  if (name == "Rf") return o.reflected_ground;
  throw std::invalid_argument("unknown quantity '" + name + "' (Pem, T, Te, Tf, Re, Rf)");
}

Json grid_to_json(const Grid& g) { return {{"from", g.from}, {"to", g.to}, {"step", g.step}}; }

Grid grid_from_json(const Json& j) {
  Grid g{parse_scalar(j.at("from")), parse_scalar(j.at("to")), parse_scalar(j.at("step"))};
  g.validate();
  return g;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Json base_metadata(const char* command, const Json& config, const Table& table) {
  return {{"tool", "mazer"},
          {"version", std::string(library_version())},
          {"command", command},
          {"config", config},
          {"columns", table.columns},
          {"rows", table.rows.size()}};
}

void refuse_if_infeasible(Engine engine, bool force_exact, const ModeProfile& profile,
                          double k_l, double kappa_n_l) {
  if (engine != Engine::ExactNumeric || force_exact) return;
  if (profile.kind() == ProfileKind::Mesa) return;
  const double steps = estimated_steps(profile, k_l, kappa_n_l);
  if (steps > kExactStepBudget) {
    std::ostringstream msg;
    msg << "exact integration at kappa_n L = " << kappa_n_l << " needs about " << steps
        << " steps per point (budget " << kExactStepBudget
        << "); use --engine auto, or --force-exact to run it anyway";
    throw EngineRefused(msg.str());
  }
}

Engine effective_engine(Engine engine, bool force_exact) {
  return force_exact ? Engine::ExactNumeric : engine;
}

}  // namespace

std::string_view library_version() { return MAZER_VERSION; }

double parse_scalar(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw std::invalid_argument("expected a number or numeric string");
  const std::string s = lower_compact(value.get<std::string>());
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_term(s, s);
  const double num = parse_term(s.substr(0, slash), s);
  const double den = parse_term(s.substr(slash + 1), s);
  if (den == 0) throw std::invalid_argument("division by zero in '" + s + "'");
  return num / den;
}

std::vector<double> Grid::points() const {
  validate();
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) xs.push_back(from + step * static_cast<double>(i));
  return xs;
}

void Grid::validate() const {
  if (!std::isfinite(from) || !std::isfinite(to) || !(to > from)) {
    throw std::invalid_argument("grid window must be nonempty (to > from)");
  }
  require_positive(step, "grid step");
  if ((to - from) / step > 1e8) throw std::invalid_argument("grid has more than 1e8 points");
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) throw std::logic_error("row width does not match header");
  rows.push_back(std::move(cells));
}

// ---------------------------------------------------------------- configs

SweepConfig SweepConfig::from_json(const Json& j) {
  SweepConfig c;
  if (j.contains("profiles")) {
    c.profiles.clear();
    for (const auto& p : j.at("profiles")) c.profiles.push_back(ModeProfile::from_name(p.get<std::string>()));
  } else if (j.contains("profile")) {
    c.profiles = {ModeProfile::from_name(j.at("profile").get<std::string>())};
  }
  if (c.profiles.empty()) throw std::invalid_argument("at least one profile is required");
  c.k_over_kappa0 = scalar_or(j, "k_over_kappa0", c.k_over_kappa0);
  require_positive(c.k_over_kappa0, "k_over_kappa0");
  if (!j.contains("kappa0L")) throw std::invalid_argument("sweep needs a kappa0L grid");
  c.kappa0_l = grid_from_json(j.at("kappa0L"));
  require_positive(c.kappa0_l.from, "kappa0L.from");
  if (j.contains("fields")) {
    c.fields.clear();
    for (const auto& f : j.at("fields")) c.fields.push_back(field_from_json(f));
  }
  if (c.fields.empty()) throw std::invalid_argument("at least one field state is required");
  if (j.contains("quantities")) c.quantities = j.at("quantities").get<std::vector<std::string>>();
  if (c.quantities.empty()) throw std::invalid_argument("at least one quantity is required");
  for (const auto& q : c.quantities) quantity(OutcomeProbabilities{}, q);
  c.engine = engine_from_name(get_or<std::string>(j, "engine", "auto"));
  c.force_exact = get_or<bool>(j, "force_exact", false);
  c.threads = get_or<unsigned>(j, "threads", 0u);
  c.spot_checks = get_or<int>(j, "spot_checks", c.spot_checks);
  if (c.spot_checks < 0 || c.spot_checks > 10) {
    throw std::invalid_argument("spot_checks must be between 0 and 10");
  }
  return c;
}

Json SweepConfig::to_json() const {
  Json profs = Json::array();
  for (const auto& p : profiles) profs.push_back(std::string(p.name()));
  Json flds = Json::array();
  for (const auto& f : fields) flds.push_back(field_to_json(f));
  return {{"command", "sweep"},   {"profiles", profs},     {"k_over_kappa0", k_over_kappa0},
          {"kappa0L", grid_to_json(kappa0_l)}, {"fields", flds}, {"quantities", quantities},
          {"engine", std::string(engine_name(engine))}, {"force_exact", force_exact},
          {"threads", threads}, {"spot_checks", spot_checks}};
}

SteadyStateConfig SteadyStateConfig::from_json(const Json& j) {
  SteadyStateConfig c;
  if (j.contains("profile")) c.profile = ModeProfile::from_name(j.at("profile").get<std::string>());
  c.k_over_kappa0 = scalar_or(j, "k_over_kappa0", c.k_over_kappa0);
  require_positive(c.k_over_kappa0, "k_over_kappa0");
  c.at_photons = get_or<int>(j, "at_photons", 0);
  if (c.at_photons < 0) throw std::invalid_argument("at_photons must be nonnegative");
  if (j.contains("kappa_nL")) c.kappa_n_l = parse_scalar(j.at("kappa_nL"));
  if (j.contains("resonance_index")) c.resonance_index = j.at("resonance_index").get<int>();
  if (c.kappa_n_l.has_value() == c.resonance_index.has_value()) {
    throw std::invalid_argument("give exactly one of kappa_nL and resonance_index");
  }
  if (c.kappa_n_l) require_positive(*c.kappa_n_l, "kappa_nL");
  if (c.resonance_index && *c.resonance_index < 0) {
    throw std::invalid_argument("resonance_index must be nonnegative");
  }
  c.n_ex = scalar_or(j, "n_ex", c.n_ex);
  c.n_b = scalar_or(j, "n_b", c.n_b);
  if (!(c.n_ex >= 0) || !(c.n_b >= 0)) throw std::invalid_argument("n_ex and n_b must be >= 0");
  const auto gain = get_or<std::string>(j, "gain", "scattering");
  if (gain == "scattering") {
    c.gain = GainModel::Scattering;
  } else if (gain == "conventional") {
    c.gain = GainModel::Conventional;
  } else if (gain == "zero") {
    c.gain = GainModel::Zero;
  } else {
    throw std::invalid_argument("gain must be scattering, conventional or zero");
  }
  c.engine = engine_from_name(get_or<std::string>(j, "engine", "auto"));
  c.force_exact = get_or<bool>(j, "force_exact", false);
  c.threads = get_or<unsigned>(j, "threads", 0u);
  return c;
}

Json SteadyStateConfig::to_json() const {
  static constexpr const char* kGainNames[] = {"scattering", "conventional", "zero"};
  Json j = {{"command", "steady-state"},
            {"profile", std::string(profile.name())},
            {"k_over_kappa0", k_over_kappa0},
            {"at_photons", at_photons},
            {"n_ex", n_ex},
            {"n_b", n_b},
            {"gain", kGainNames[static_cast<int>(gain)]},
            {"engine", std::string(engine_name(engine))},
            {"force_exact", force_exact},
            {"threads", threads}};
  if (kappa_n_l) j["kappa_nL"] = *kappa_n_l;
  if (resonance_index) j["resonance_index"] = *resonance_index;
  return j;
}

ResonanceConfig ResonanceConfig::from_json(const Json& j) {
  ResonanceConfig c;
  if (j.contains("profile")) c.profile = ModeProfile::from_name(j.at("profile").get<std::string>());
  c.k_over_kappa_n = scalar_or(j, "k_over_kappa_n", c.k_over_kappa_n);
  require_positive(c.k_over_kappa_n, "k_over_kappa_n");
  if (!j.contains("window")) throw std::invalid_argument("resonances needs a window");
  c.window_from = parse_scalar(j.at("window").at("from"));
  c.window_to = parse_scalar(j.at("window").at("to"));
  require_positive(c.window_from, "window.from");
  if (!(c.window_to > c.window_from)) throw std::invalid_argument("window must be nonempty");
  c.engine = engine_from_name(get_or<std::string>(j, "engine", "exact"));
  c.points_per_width = scalar_or(j, "points_per_width", c.points_per_width);
  c.threads = get_or<unsigned>(j, "threads", 0u);
  return c;
}

Json ResonanceConfig::to_json() const {
  return {{"command", "resonances"},
          {"profile", std::string(profile.name())},
          {"k_over_kappa_n", k_over_kappa_n},
          {"window", {{"from", window_from}, {"to", window_to}}},
          {"engine", std::string(engine_name(engine))},
          {"points_per_width", points_per_width},
          {"threads", threads}};
}

// ---------------------------------------------------------------- runs

RunResult run_sweep(const SweepConfig& config) {
  const std::vector<double> grid = config.kappa0_l.points();
  const double r = config.k_over_kappa0;
  const Engine engine = effective_engine(config.engine, config.force_exact);

  std::vector<std::vector<double>> weights;
  std::set<int> needed_set;
  for (const auto& f : config.fields) {
    weights.push_back(field_weights(f));
    for (std::size_t n = 0; n < weights.back().size(); ++n) {
      if (weights.back()[n] > 0) needed_set.insert(static_cast<int>(n));
    }
  }
  const std::vector<int> needed(needed_set.begin(), needed_set.end());
  const int n_top = needed.back();

  for (const auto& p : config.profiles) {
    const double kmax = grid.back();
    refuse_if_infeasible(config.engine, config.force_exact, p, r * kmax,
                         rabi_wavenumber(kmax, n_top));
  }

  const std::size_t np = config.profiles.size();
  const std::size_t ng = grid.size();
  // outcome[(p * ng + i) * needed + k]
  std::vector<OutcomeProbabilities> outcome(np * ng * needed.size());
  std::vector<EvaluationPath> path(np * ng, EvaluationPath::ExactNumeric);
  parallel_for(np * ng, config.threads, [&](std::size_t task) {
    const ModeProfile& profile = config.profiles[task / ng];
    const double k0 = grid[task % ng];
    EvaluationPath used = EvaluationPath::MesaClosedForm;
    for (std::size_t k = 0; k < needed.size(); ++k) {
      const PointSolution sol =
          solve_point(profile, r * k0, rabi_wavenumber(k0, needed[k]), engine);
      outcome[task * needed.size() + k] = sol.outcomes();
      const EvaluationPath pth = sol.path();
      if (k == 0 || pth == EvaluationPath::Semiclassical) used = pth;
    }
    path[task] = used;
  });

  Table table;
  table.columns.push_back("kappa0L");
  for (const auto& q : config.quantities) {
    for (const auto& f : config.fields) {
      for (const auto& p : config.profiles) {
        std::string name = q + "_" + field_label(f);
        if (np > 1) name += "_" + std::string(p.name());
        table.columns.push_back(name);
      }
    }
  }
  for (std::size_t i = 0; i < ng; ++i) {
    std::vector<std::string> row{format_number(grid[i])};
    for (const auto& q : config.quantities) {
      for (std::size_t f = 0; f < config.fields.size(); ++f) {
        for (std::size_t p = 0; p < np; ++p) {
          const std::size_t base = (p * ng + i) * needed.size();
          double v = 0;
          for (std::size_t k = 0; k < needed.size(); ++k) {
            const auto n = static_cast<std::size_t>(needed[k]);
            if (n < weights[f].size()) v += weights[f][n] * quantity(outcome[base + k], q);
          }
          row.push_back(format_number(v < 1e-300 ? 0.0 : v));
        }
      }
    }
    table.add_row(std::move(row));
  }

  Json meta = base_metadata("sweep", config.to_json(), table);
  meta["photon_numbers"] = needed;
  Json per_point = Json::object();
  for (std::size_t p = 0; p < np; ++p) {
    Json list = Json::array();
    for (std::size_t i = 0; i < ng; ++i) list.push_back(std::string(path_name(path[p * ng + i])));
    per_point[std::string(config.profiles[p].name())] = list;
  }
  meta["engine_per_point"] = per_point;

  // Exact-integration spot checks of points that went through the semiclassical chain.
  Json checks = Json::array();
  if (config.engine == Engine::Auto && config.spot_checks > 0) {
    struct Check {
      std::size_t p;
      std::size_t i;
      std::size_t k;
    };
    std::vector<Check> todo;
    for (std::size_t p = 0; p < np; ++p) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < ng; ++i) {
        if (path[p * ng + i] == EvaluationPath::Semiclassical) rows.push_back(i);
      }
      if (rows.empty()) continue;
      const auto s = std::min<std::size_t>(static_cast<std::size_t>(config.spot_checks), rows.size());
      for (std::size_t c = 0; c < s; ++c) {
        const std::size_t i = s == 1 ? rows[rows.size() / 2] : rows[c * (rows.size() - 1) / (s - 1)];
        for (std::size_t k = 0; k < needed.size(); ++k) todo.push_back({p, i, k});
      }
    }
    std::vector<OutcomeProbabilities> exact(todo.size());
    parallel_for(todo.size(), config.threads, [&](std::size_t t) {
      const Check& c = todo[t];
      const double k0 = grid[c.i];
      exact[t] = solve_point(config.profiles[c.p], r * k0, rabi_wavenumber(k0, needed[c.k]),
                             Engine::ExactNumeric)
                     .outcomes();
    });
    double worst_pem = 0;
    double worst_t = 0;
    for (std::size_t t = 0; t < todo.size(); ++t) {
      const Check& c = todo[t];
      const auto& approx = outcome[(c.p * ng + c.i) * needed.size() + c.k];
      worst_pem = std::max(worst_pem, std::abs(approx.emission() - exact[t].emission()));
      worst_t = std::max(worst_t, std::abs(approx.transmission() - exact[t].transmission()));
      checks.push_back({{"profile", std::string(config.profiles[c.p].name())},
                        {"kappa0L", grid[c.i]},
                        {"n", needed[c.k]},
                        {"Pem_semiclassical", approx.emission()},
                        {"Pem_exact", exact[t].emission()},
                        {"T_semiclassical", approx.transmission()},
                        {"T_exact", exact[t].transmission()}});
    }
    if (!todo.empty()) {
      meta["spot_check_max_abs_deviation"] = {{"Pem", worst_pem}, {"T", worst_t}};
    }
  }
  meta["spot_checks"] = checks;
  return {std::move(table), std::move(meta)};
}

RunResult run_steady_state(const SteadyStateConfig& config) {
  const Engine engine = effective_engine(config.engine, config.force_exact);
  const double ref_scale = std::pow(config.at_photons + 1.0, 0.25);
  const double r_ref = config.k_over_kappa0 / ref_scale;

  Json located;
  double kappa_ref = 0;
  if (config.kappa_n_l) {
    kappa_ref = *config.kappa_n_l;
  } else {
    const int m = *config.resonance_index;
    if (config.profile.kind() == ProfileKind::Mesa) {
      if (m < 1) throw std::invalid_argument("mesa resonance index must be >= 1");
      kappa_ref = mesa_resonance_positions(r_ref, m, m).front();
      located = {{"index", m}, {"position", kappa_ref}, {"method", "closed form"}};
    } else {
      const double root = resonance_condition_roots(r_ref, m, m).front();
      const double spacing = pi * pi / (2.0 * resonance_phase_integral(r_ref));
      ResonanceSearch search;
      search.engine = engine == Engine::Auto ? Engine::Auto : engine;
      search.threads = config.threads;
      search.check_condition_roots = false;
      refuse_if_infeasible(config.engine, config.force_exact, config.profile, r_ref * root, root);
      const auto found = find_resonances(config.profile, r_ref, root - spacing / 2,
                                         root + spacing / 2, search);
      const auto it = std::min_element(found.begin(), found.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.position - root) < std::abs(b.position - root);
      });
      if (it == found.end()) {
        throw WindowTooCoarse("no resonance found near the predicted position " +
                              format_number(root));
      }
      kappa_ref = it->position;
      located = {{"index", it->index}, {"position", it->position}, {"fwhm", it->fwhm},
                 {"peak", it->peak},   {"predicted", root}};
    }
  }
  const double kappa0 = kappa_ref / ref_scale;
  const double k_l = config.k_over_kappa0 * kappa0;

  std::map<EvaluationPath, long> path_counts;
  std::mutex path_mutex;
  auto gain_at = [&](int n) -> double {
    const double kn = rabi_wavenumber(kappa0, n);
    switch (config.gain) {
      case GainModel::Zero:
        return 0.0;
      case GainModel::Conventional:
        return conventional_emission(conventional_rabi_angle(k_l, kn));
      default: {
        refuse_if_infeasible(config.engine, config.force_exact, config.profile, k_l, kn);
        const PointSolution sol = solve_point(config.profile, k_l, kn, engine);
        {
          std::lock_guard lock(path_mutex);
          ++path_counts[sol.path()];
        }
        return std::clamp(sol.outcomes().emission(), 0.0, 1.0);
      }
    }
  };
  // Extend the cached gain curve in parallel chunks as the stationary recursion asks for more.
  std::vector<double> cache;
  MicromaserConfig mm;
  mm.n_ex = config.n_ex;
  mm.n_b = config.n_b;
  mm.gain = [&](int n) {
    const auto need = static_cast<std::size_t>(n) + 1;
    if (need > cache.size()) {
      const std::size_t old = cache.size();
      const std::size_t target = std::max({need, 2 * old, std::size_t{64}});
      cache.resize(target);
      parallel_for(target - old, config.threads,
                   [&](std::size_t i) { cache[old + i] = gain_at(static_cast<int>(old + i)); });
    }
    return cache[static_cast<std::size_t>(n)];
  };
  const PhotonDistribution dist = steady_state_distribution(mm);

  Table table;
  table.columns = {"n", "p", "Pem"};
  for (std::size_t n = 0; n < dist.p.size(); ++n) {
    table.add_row({std::to_string(n), format_number(dist.p[n] < 1e-300 ? 0.0 : dist.p[n]),
                   format_number(mm.gain(static_cast<int>(n)))});
  }
  Json meta = base_metadata("steady-state", config.to_json(), table);
  meta["kappa0L"] = kappa0;
  meta["kL"] = k_l;
  meta["kappa_nL_reference"] = kappa_ref;
  if (!located.is_null()) meta["located_resonance"] = located;
  meta["n_max"] = dist.p.size() - 1;
  meta["mean_photons"] = dist.mean();
  meta["local_maxima"] = distribution_peaks(dist);
  Json counts = Json::object();
  for (const auto& [p, c] : path_counts) counts[std::string(path_name(p))] = c;
  meta["engine_counts"] = counts;
  return {std::move(table), std::move(meta)};
}

RunResult run_resonances(const ResonanceConfig& config) {
  ResonanceSearch search;
  search.engine = config.engine;
  search.points_per_width = config.points_per_width;
  search.threads = config.threads;
  const double r = config.k_over_kappa_n;
  const auto found =
      find_resonances(config.profile, r, config.window_from, config.window_to, search);
  const bool mesa = config.profile.kind() == ProfileKind::Mesa;

  Table table;
  table.columns = {"index", "position", "fwhm",      "peak",
                   "parity", "shallow", "resolved", "predicted", "predicted_small_k"};
  for (const auto& info : found) {
    double predicted = 0;
    double small_k = 0;
    if (mesa) {
      predicted = info.index >= 1 ? mesa_resonance_positions(r, info.index, info.index).front() : 0;
      small_k = info.index * pi;
    } else {
      predicted = resonance_condition_roots(r, info.index, info.index).front();
      small_k = resonance_condition_roots(0.0, info.index, info.index).front();
    }
    table.add_row({std::to_string(info.index), format_number(info.position),
                   format_number(info.fwhm), format_number(info.peak),
                   info.parity == Parity::Even ? "even" : "odd", info.shallow ? "1" : "0",
                   info.resolved ? "1" : "0", format_number(predicted), format_number(small_k)});
  }
  Json meta = base_metadata("resonances", config.to_json(), table);
  meta["index_convention"] = mesa ? "j: peak at q L = j pi" : "m: 0-based resonance count";
  return {std::move(table), std::move(meta)};
}

Json run_scatter(const ModeProfile& profile, double k_l, double kappa_l, int n, Engine engine,
                 bool force_exact) {
  require_positive(k_l, "kL");
  const double kn = rabi_wavenumber(kappa_l, n);
  refuse_if_infeasible(engine, force_exact, profile, k_l, kn);
  const PointSolution sol = solve_point(profile, k_l, kn, effective_engine(engine, force_exact));
  const OutcomeProbabilities o = sol.outcomes();
  auto channel = [](const ChannelSolution& c) {
    return Json{{"r", {c.amplitudes.r.real(), c.amplitudes.r.imag()}},
                {"t", {c.amplitudes.t.real(), c.amplitudes.t.imag()}},
                {"R", std::norm(c.amplitudes.r)},
                {"T", std::norm(c.amplitudes.t)},
                {"beta_even_L", c.beta.even},
                {"beta_odd_L", c.beta.odd},
                {"path", std::string(path_name(c.path))}};
  };
  Json j = {{"profile", std::string(profile.name())},
            {"kL", k_l},
            {"kappaL", kappa_l},
            {"n", n},
            {"kappa_nL", kn},
            {"Te", o.transmitted_excited},
            {"Tf", o.transmitted_ground},
            {"Re", o.reflected_excited},
            {"Rf", o.reflected_ground},
            {"Pem", o.emission()},
            {"T", o.transmission()},
            {"plus", channel(sol.plus)},
            {"minus", channel(sol.minus)}};
  if (kn > 0) j["xi"] = xi_parameter(k_l, kn);
  return j;
}

// ---------------------------------------------------------------- output

void write_csv(const Table& table, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << ',';
      out << csv_escape(cells[c]);
    }
    out << '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
}

void write_result(const RunResult& result, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(result.table, csv);
    if (!csv) throw std::runtime_error("failed writing " + path.string());
  }
  const auto meta_path = path.string() + ".meta.json";
  std::ofstream meta(meta_path, std::ios::binary);
  if (!meta) throw std::runtime_error("cannot open " + meta_path + " for writing");
  meta << result.metadata.dump(2) << '\n';
  if (!meta) throw std::runtime_error("failed writing " + meta_path);
}

// ---------------------------------------------------------------- presets

std::vector<std::string> preset_names() { return {"fig1", "fig2a", "fig2b", "fig3", "fig4"}; }

std::vector<PresetJob> preset_jobs(const std::string& name) {
  if (name == "fig1") {
    return {{"fig1.csv",
             {{"command", "sweep"},
              {"profiles", {"sinusoidal", "mesa"}},
              {"k_over_kappa0", 0.01},
              {"kappa0L", {{"from", "100pi"}, {"to", "104pi"}, {"step", "pi/1000"}}},
              {"fields", {{{"kind", "number"}, {"n", 0}}}},
              {"quantities", {"Pem"}},
              {"engine", "auto"}}}};
  }
  if (name == "fig2a" || name == "fig2b") {
    Json j = {{"command", "steady-state"},
              {"k_over_kappa0", 0.01},
              {"at_photons", 2},
              {"n_ex", 1000},
              {"n_b", 1},
              {"gain", "scattering"},
              {"engine", "auto"}};
    if (name == "fig2a") {
      j["profile"] = "mesa";
      j["kappa_nL"] = "99pi";
    } else {
      j["profile"] = "sinusoidal";
      j["resonance_index"] = 99;
    }
    return {{name + ".csv", j}};
  }
  if (name == "fig3") {
    Json fields = Json::array();
    for (int n = 0; n <= 3; ++n) fields.push_back({{"kind", "number"}, {"n", n}});
    return {{"fig3.csv",
             {{"command", "sweep"},
              {"profiles", {"sinusoidal"}},
              {"k_over_kappa0", 0.01},
              {"kappa0L", {{"from", "30000pi"}, {"to", "30005pi"}, {"step", "pi/200"}}},
              {"fields", fields},
              {"quantities", {"T", "Pem"}},
              {"engine", "auto"}}}};
  }
  if (name == "fig4") {
    const Json fields = {{{"kind", "coherent"}, {"mean", 0.25}}, {{"kind", "coherent"}, {"mean", 2}}};
    auto job = [&](const char* profile, const char* step) {
      return Json{{"command", "sweep"},
                  {"profiles", {profile}},
                  {"k_over_kappa0", 0.01},
                  {"kappa0L", {{"from", "100pi"}, {"to", "110pi"}, {"step", step}}},
                  {"fields", fields},
                  {"quantities", {"T"}},
                  {"engine", "auto"}};
    };
    // The mesa peaks are several times narrower, so that profile gets a finer grid.
    return {{"fig4_mesa.csv", job("mesa", "pi/2000")},
            {"fig4_sinusoidal.csv", job("sinusoidal", "pi/200")}};
  }
  throw std::invalid_argument("unknown preset '" + name + "' (fig1, fig2a, fig2b, fig3, fig4)");
}

RunResult run_config(const Json& config) {
  const auto command = config.at("command").get<std::string>();
  if (command == "sweep") return run_sweep(SweepConfig::from_json(config));
  if (command == "steady-state") return run_steady_state(SteadyStateConfig::from_json(config));
  if (command == "resonances") return run_resonances(ResonanceConfig::from_json(config));
  throw std::invalid_argument("unknown command '" + command +
                              "' (sweep, steady-state, resonances)");
}

}  // namespace mazer
