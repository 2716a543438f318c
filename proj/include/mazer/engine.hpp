#pragma once

// Chooses how a channel is evaluated at one (kL, kappa_n L) point and runs
// batches of points on a small thread pool.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mazer/mode_profile.hpp"
#include "mazer/scattering.hpp"
#include "mazer/semiclassical.hpp"

namespace mazer {

enum class Engine { ExactNumeric, Semiclassical, Auto };

// What actually produced a result.
enum class EvaluationPath { MesaClosedForm, ExactNumeric, Semiclassical };

std::string_view engine_name(Engine engine);
Engine engine_from_name(std::string_view name);  // "exact" | "semiclassical" | "auto"
std::string_view path_name(EvaluationPath path);

// Auto switches to the semiclassical chain above this many integrator steps
// per point (both channels, base pass plus halved-step check).
inline constexpr double kExactStepBudget = 1e7;

double estimated_steps(const ModeProfile& profile, double k_l, double kappa_n_l);

class EngineRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelSolution {
  ChannelAmplitudes amplitudes;
  LogDerivativePair beta;
  EvaluationPath path;
};

struct PointSolution {
  ChannelSolution plus;
  ChannelSolution minus;

  [[nodiscard]] OutcomeProbabilities outcomes() const {
    return outcome_probabilities(plus.amplitudes, minus.amplitudes);
  }
  // Semiclassical if either channel used it.
  [[nodiscard]] EvaluationPath path() const;
};

EvaluationPath resolve_path(const ModeProfile& profile, double k_l, double kappa_n_l,
                            Engine engine);

// The mesa profile always uses its closed form. For the sinusoid the
// semiclassical path uses the edge-matched barrier and the xi-banded well
// approximations; above the barrier top it falls back to the integrator.
ChannelSolution solve(const ModeProfile& profile, Channel channel, double k_l, double kappa_n_l,
                      Engine engine,
                      WellApproximation well = WellApproximation::Auto);

PointSolution solve_point(const ModeProfile& profile, double k_l, double kappa_n_l,
                          Engine engine);

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware).
// Exceptions are rethrown on the caller's thread (the one from the lowest index).
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace mazer
