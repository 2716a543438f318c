#include "mazer/mesa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mazer {

namespace {

constexpr double kSeriesBelow = 1e-4;

double clamp_beta(double beta) {
  if (std::isnan(beta)) return kMaxLogDerivative;
  return std::clamp(beta, -kMaxLogDerivative, kMaxLogDerivative);
}

// Oscillatory interior with wavenumber q.
LogDerivativePair oscillatory(double q) {
  const double x = q / 2;
  if (x < kSeriesBelow) {
    return {q * q / 2 * (1 + q * q / 12), -2.0 * (1 - q * q / 12)};
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  return {clamp_beta(q * s / c), clamp_beta(-q * c / s)};
}

// Evanescent interior with decay constant kp.
LogDerivativePair evanescent(double kp) {
  const double x = kp / 2;
  if (x < kSeriesBelow) {
    return {-kp * kp / 2 * (1 - kp * kp / 12), -2.0 * (1 + kp * kp / 12)};
  }
  return {-kp * std::tanh(x), clamp_beta(-kp / std::tanh(x))};
}

}  // namespace

LogDerivativePair mesa_logderivs_exact(Channel channel, double k_l, double kappa_n_l) {
  if (!(k_l > 0)) throw std::invalid_argument("kL must be positive");
  if (!(kappa_n_l >= 0)) throw std::invalid_argument("kappa_n L must be nonnegative");
  const double k2 = k_l * k_l;
  const double kn2 = kappa_n_l * kappa_n_l;
  if (channel == Channel::Minus) return oscillatory(std::sqrt(k2 + kn2));
  if (k2 >= kn2) return oscillatory(std::sqrt(k2 - kn2));
  return evanescent(std::sqrt(kn2 - k2));
}

LogDerivativePair mesa_logderivs_small_k(Channel channel, double kappa_n_l) {
  if (!(kappa_n_l > 0)) throw std::invalid_argument("kappa_n L must be positive");
  return channel == Channel::Minus ? oscillatory(kappa_n_l) : evanescent(kappa_n_l);
}

ChannelAmplitudes mesa_amplitudes(Channel channel, double k_l, double kappa_n_l) {
  return amplitudes_from_logderivs(mesa_logderivs_exact(channel, k_l, kappa_n_l), k_l);
}

std::vector<double> mesa_resonance_positions(double k_over_kappa_n, int j_first, int j_last) {
  if (k_over_kappa_n < 0) throw std::invalid_argument("k/kappa_n must be nonnegative");
  std::vector<double> out;
  const double scale = 1.0 / std::sqrt(1.0 + k_over_kappa_n * k_over_kappa_n);
  for (int j = std::max(1, j_first); j <= j_last; ++j) {
    out.push_back(j * std::numbers::pi * scale);
  }
  return out;
}

}  // namespace mazer
