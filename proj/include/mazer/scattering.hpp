#pragma once

// Exact solution of the dressed-channel scattering problem
//
//     phi'' + [ (kL)^2 -/+ (kappa_n L)^2 u(z) ] phi = 0        (z in units of L)
//
// for the barrier (Plus, upper sign) and well (Minus) channels. The even and
// odd real solutions are integrated from the cavity centre to the left edge;
// their logarithmic derivatives there fix the reflection and transmission
// amplitudes of a wave incident from the left.

#include <complex>
#include <stdexcept>
#include <string>

#include "mazer/mode_profile.hpp"

namespace mazer {

using Complex = std::complex<double>;

enum class Channel { Plus, Minus };  // |+,n> barrier, |-,n> well

std::string_view channel_name(Channel channel);

// kappa_n L = kappa L (n + 1)^(1/4). The only place the photon-number scaling lives.
double rabi_wavenumber(double kappa_l, int n);

struct ScatteringParams {
  double k_l = 1.0;      // incident wavenumber times L
  double kappa_l = 1.0;  // vacuum coupling wavenumber times L
  int n = 0;             // photons in the cavity
  Channel channel = Channel::Minus;
  ModeProfile profile = ModeProfile::mesa();

  [[nodiscard]] double kappa_n_l() const { return rabi_wavenumber(kappa_l, n); }

  // Direct construction from kappa_n L (n = 0 so that kappa_l == kappa_n_l).
  static ScatteringParams at_coupling(ModeProfile profile, Channel channel, double k_l,
                                      double kappa_n_l);

  // Throws std::invalid_argument unless k_l > 0, kappa_l >= 0 and n >= 0.
  void validate() const;
};

// beta L = phi'/phi at z = -L/2 for the even and odd solutions.
struct LogDerivativePair {
  double even;
  double odd;
};

struct ChannelAmplitudes {
  Complex r;
  Complex t;
};

struct OutcomeProbabilities {
  double transmitted_excited;  // T_e
  double transmitted_ground;   // T_f
  double reflected_excited;    // R_e
  double reflected_ground;     // R_f

  // photon left behind: T_f + R_f
  [[nodiscard]] double emission() const { return transmitted_ground + reflected_ground; }
  // atom transmitted in either state: T_e + T_f
  [[nodiscard]] double transmission() const { return transmitted_excited + transmitted_ground; }
  [[nodiscard]] double total() const {
    return transmitted_excited + transmitted_ground + reflected_excited + reflected_ground;
  }
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double z_over_l)
      : std::runtime_error(what + " (at z/L = " + std::to_string(z_over_l) + ")"),
        z_over_l_(z_over_l) {}
  [[nodiscard]] double z_over_l() const { return z_over_l_; }

 private:
  double z_over_l_;
};

class OracleOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Log-derivatives are clamped to this magnitude near nodes of phi at the edge.
inline constexpr double kMaxLogDerivative = 1e15;

// Step control shared by both integrators: q_max h <= kPhasePerStep with
// q_max = sqrt(k^2 + kappa_n^2 max u).
inline constexpr double kPhasePerStep = 0.02;
// Halved-step Richardson tolerance on the edge angle atan(beta L).
inline constexpr double kRichardsonTolerance = 1e-8;
// State vectors are rescaled once their max-norm passes this.
inline constexpr double kRenormalizeAbove = 1e100;

// Number of fixed steps over the half cavity for the base pass.
long base_step_count(const ScatteringParams& params);

// Even/odd log-derivatives from a fourth-order Magnus integration of the
// fundamental matrix from z = 0 to z = -L/2, with a halved-step Richardson
// check and extrapolation. Throws IntegrationError on non-finite state or a
// failed Richardson check.
LogDerivativePair integrate_even_odd(const ScatteringParams& params);

// Same integration with explicit initial scales for the even (phi(0) = even_scale,
// phi'(0) = 0) and odd (phi(0) = 0, phi'(0) = odd_scale) solutions at a fixed
// step count. Used to check that beta does not depend on normalisation.
LogDerivativePair integrate_even_odd_scaled(const ScatteringParams& params, double even_scale,
                                            double odd_scale, long steps);

// Independent route: RK4 on the Riccati variable y = phi'/phi, switching to
// w = 1/y near poles.
LogDerivativePair integrate_even_odd_riccati(const ScatteringParams& params);

// r and t from the edge log-derivatives (everything in units of 1/L).
ChannelAmplitudes amplitudes_from_logderivs(const LogDerivativePair& beta, double k_l);

// T_e, T_f, R_e, R_f for an atom entering in |e> (both channels at the same k, kappa_n).
OutcomeProbabilities outcome_probabilities(const ChannelAmplitudes& plus,
                                           const ChannelAmplitudes& minus);

// Piecewise-constant slicing of u with exact plane-wave / evanescent propagation
// across each slice. Converges to the log-derivative route as slices grow.
// Throws OracleOverflow if the evanescent growth leaves double range.
ChannelAmplitudes transfer_matrix_oracle(const ScatteringParams& params, int slices);

// Convenience: integrate_even_odd followed by amplitudes_from_logderivs.
ChannelAmplitudes solve_channel(const ScatteringParams& params);

}  // namespace mazer
