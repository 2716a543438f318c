#pragma once

// Field-state weights, ensemble averages over photon number, and the
// micromaser gain/loss master equation with its stationary solution.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mazer {

inline constexpr double kTailTolerance = 1e-12;
inline constexpr long kMaxPhotonCeiling = 1'000'000;

struct FieldState {
  enum class Kind { Number, Coherent, Thermal };
  Kind kind;
  double parameter;  // n for Number, mean photon number otherwise
  long truncation = 0;  // minimum N_max; raised until the dropped tail is below kTailTolerance

  static FieldState number(int n) { return {Kind::Number, static_cast<double>(n)}; }
  static FieldState coherent(double mean) { return {Kind::Coherent, mean}; }
  static FieldState thermal(double mean) { return {Kind::Thermal, mean}; }
};

// |c_n|^2 for n = 0..N_max, renormalised to unit sum.
std::vector<double> field_weights(const FieldState& state);

// sum_n weights[n] * per_n[n]; throws std::invalid_argument on a length mismatch.
double ensemble_average(const std::vector<double>& weights, const std::vector<double>& per_n);

// Hot-atom emission probability sin^2(theta_n).
double conventional_emission(double rabi_angle);
// theta_n = (kappa_n L)^2 / (2 kL): the Rabi angle accumulated over the transit time.
double conventional_rabi_angle(double k_l, double kappa_n_l);

using GainFunction = std::function<double(int)>;

struct MicromaserConfig {
  double n_ex = 0.0;  // atoms per cavity lifetime, r Q / omega
  double n_b = 0.0;   // thermal photons
  GainFunction gain;  // P_em^n, each in [0, 1]
  std::optional<double> pump_rate;  // r
  std::optional<double> loss_rate;  // omega / Q

  // Throws std::invalid_argument for negative parameters or an inconsistent
  // r / (omega/Q) versus n_ex.
  void validate() const;
};

struct PhotonDistribution {
  std::vector<double> p;

  [[nodiscard]] double mean() const;
  [[nodiscard]] double total() const;
};

class NonNormalizable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// p_n / p_{n-1} = (n_b + n_ex P^{n-1} / n) / (n_b + 1), accumulated in log
// space. N_max grows until the geometric bound on the dropped tail is below
// kTailTolerance (at least `min_length` entries are returned).
PhotonDistribution steady_state_distribution(const MicromaserConfig& config, long min_length = 1);

// Gain/loss flow equation. Upward flux between n and n+1:
//   F_n = r P^n p_n + (omega/Q) n_b (n+1) p_n - (omega/Q)(n_b+1)(n+1) p_{n+1},
// dp_n/dt = F_{n-1} - F_n, with no flux out of the top level.
std::vector<double> master_equation_rhs(const std::vector<double>& p,
                                        const MicromaserConfig& config);

class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Classical RK4 with h <= 0.1 / (largest outflow rate). Requires pump_rate and loss_rate.
PhotonDistribution evolve_master_equation(const PhotonDistribution& p0,
                                          const MicromaserConfig& config, double t_end);

// Interior local maxima (n >= 1) whose height is at least rel_threshold * max p.
std::vector<int> distribution_peaks(const PhotonDistribution& dist, double rel_threshold = 1e-3);

}  // namespace mazer
