#include "mazer/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

#include "mazer/mesa.hpp"

namespace mazer {

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::ExactNumeric:
      return "exact";
    case Engine::Semiclassical:
      return "semiclassical";
    default:
      return "auto";
  }
}

Engine engine_from_name(std::string_view name) {
  if (name == "exact" || name == "ExactNumeric") return Engine::ExactNumeric;
  if (name == "semiclassical" || name == "Semiclassical") return Engine::Semiclassical;
  if (name == "auto" || name == "Auto") return Engine::Auto;
  throw std::invalid_argument("unknown engine '" + std::string(name) +
                              "' (expected exact, semiclassical or auto)");
}

std::string_view path_name(EvaluationPath path) {
  switch (path) {
    case EvaluationPath::MesaClosedForm:
      return "mesa-closed-form";
    case EvaluationPath::ExactNumeric:
      return "exact";
    default:
      return "semiclassical";
  }
}

double estimated_steps(const ModeProfile& profile, double k_l, double kappa_n_l) {
  const auto p = ScatteringParams::at_coupling(profile, Channel::Minus, k_l, kappa_n_l);
  return 3.0 * static_cast<double>(base_step_count(p)) * 2.0;
}

EvaluationPath PointSolution::path() const {
  if (plus.path == EvaluationPath::Semiclassical || minus.path == EvaluationPath::Semiclassical) {
    return EvaluationPath::Semiclassical;
  }
  return minus.path;
}

EvaluationPath resolve_path(const ModeProfile& profile, double k_l, double kappa_n_l,
                            Engine engine) {
  if (profile.kind() == ProfileKind::Mesa) return EvaluationPath::MesaClosedForm;
  switch (engine) {
    case Engine::ExactNumeric:
      return EvaluationPath::ExactNumeric;
    case Engine::Semiclassical:
      return EvaluationPath::Semiclassical;
    default:
      return estimated_steps(profile, k_l, kappa_n_l) <= kExactStepBudget
                 ? EvaluationPath::ExactNumeric
                 : EvaluationPath::Semiclassical;
  }
}

ChannelSolution solve(const ModeProfile& profile, Channel channel, double k_l, double kappa_n_l,
                      Engine engine, WellApproximation well) {
  const EvaluationPath path = resolve_path(profile, k_l, kappa_n_l, engine);
  auto from_beta = [&](LogDerivativePair beta, EvaluationPath used) {
    return ChannelSolution{amplitudes_from_logderivs(beta, k_l), beta, used};
  };
  if (path == EvaluationPath::MesaClosedForm) {
    return from_beta(mesa_logderivs_exact(channel, k_l, kappa_n_l), path);
  }
  const auto numeric = [&] {
    return from_beta(
        integrate_even_odd(ScatteringParams::at_coupling(profile, channel, k_l, kappa_n_l)),
        EvaluationPath::ExactNumeric);
  };
  if (path == EvaluationPath::ExactNumeric || kappa_n_l == 0.0) return numeric();

  if (channel == Channel::Plus) {
    if (!profile.turning_point(k_l / kappa_n_l)) return numeric();
    return from_beta(edge_barrier_logderivs(profile, k_l, kappa_n_l), path);
  }
  const SemiclassicalPoint point = make_point(profile, k_l, kappa_n_l);
  switch (resolve_well_approximation(well, point.xi)) {
    case WellApproximation::SmallXi:
      return {small_xi_amplitudes(point), small_xi_logderivs(point), path};
    case WellApproximation::LargeXi:
      return {large_xi_amplitudes(point), large_xi_logderivs(point), path};
    default:
      return from_beta(airy_logderivs(point), path);
  }
}

PointSolution solve_point(const ModeProfile& profile, double k_l, double kappa_n_l,
                          Engine engine) {
  return {solve(profile, Channel::Plus, k_l, kappa_n_l, engine),
          solve(profile, Channel::Minus, k_l, kappa_n_l, engine)};
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace mazer
