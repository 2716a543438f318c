#include "mazer/photon_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mazer {

namespace {

void normalize(std::vector<double>& w) {
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
}

}  // namespace

std::vector<double> field_weights(const FieldState& state) {
  const double a = state.parameter;
  if (!(a >= 0) || !std::isfinite(a)) throw std::invalid_argument("field parameter must be >= 0");
  std::vector<double> w;
  switch (state.kind) {
    case FieldState::Kind::Number: {
      if (a != std::floor(a)) throw std::invalid_argument("number state needs an integer n");
      const auto n = static_cast<long>(a);
      w.assign(static_cast<std::size_t>(std::max(n + 1, state.truncation + 1)), 0.0);
      w[static_cast<std::size_t>(n)] = 1.0;
      return w;
    }
    case FieldState::Kind::Coherent: {
      double log_p = -a;
      for (long n = 0;; ++n) {
        if (n > 0) log_p += (a > 0 ? std::log(a) : -INFINITY) - std::log(static_cast<double>(n));
        w.push_back(std::exp(log_p));
        const double ratio = a / static_cast<double>(n + 1);
        const bool tail_ok =
            ratio < 1 && w.back() * ratio / (1 - ratio) < kTailTolerance;
        if (n >= state.truncation && tail_ok) break;
        if (n >= kMaxPhotonCeiling) throw std::invalid_argument("coherent amplitude too large");
      }
      break;
    }
    case FieldState::Kind::Thermal: {
      const double q = a / (a + 1);
      for (long n = 0;; ++n) {
        w.push_back(std::pow(q, static_cast<double>(n)) / (a + 1));
        if (n >= state.truncation && std::pow(q, static_cast<double>(n + 1)) < kTailTolerance) {
          break;
        }
        if (n >= kMaxPhotonCeiling) throw std::invalid_argument("thermal occupation too large");
      }
      break;
    }
  }
  normalize(w);
  return w;
}

double ensemble_average(const std::vector<double>& weights, const std::vector<double>& per_n) {
  if (weights.size() != per_n.size()) {
    throw std::invalid_argument("weights and per-photon-number values differ in length");
  }
  return std::inner_product(weights.begin(), weights.end(), per_n.begin(), 0.0);
}

double conventional_emission(double rabi_angle) {
  const double s = std::sin(rabi_angle);
  return s * s;
}

double conventional_rabi_angle(double k_l, double kappa_n_l) {
  if (!(k_l > 0)) throw std::invalid_argument("kL must be positive");
  return kappa_n_l * kappa_n_l / (2.0 * k_l);
}

void MicromaserConfig::validate() const {
  if (!(n_ex >= 0) || !std::isfinite(n_ex)) throw std::invalid_argument("N_ex must be >= 0");
  if (!(n_b >= 0) || !std::isfinite(n_b)) throw std::invalid_argument("n_b must be >= 0");
  if (!gain) throw std::invalid_argument("gain curve missing");
  if (pump_rate && loss_rate) {
    if (!(*pump_rate >= 0) || !(*loss_rate > 0)) {
      throw std::invalid_argument("rates must be nonnegative (loss rate positive)");
    }
    const double implied = *pump_rate / *loss_rate;
    if (std::abs(implied - n_ex) > 1e-12 * std::max(1.0, n_ex)) {
      throw std::invalid_argument("N_ex is inconsistent with pump_rate / loss_rate");
    }
  }
}

double PhotonDistribution::mean() const {
  double m = 0;
  for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
  return m;
}

double PhotonDistribution::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

PhotonDistribution steady_state_distribution(const MicromaserConfig& config, long min_length) {
  config.validate();
  const double nb = config.n_b;
  std::vector<double> log_p{0.0};
  double log_sum = 0.0;  // log of sum of unnormalised p
  for (long n = 1;; ++n) {
    const double g = config.gain(static_cast<int>(n - 1));
    if (!(g >= 0 && g <= 1)) throw std::invalid_argument("gain values must lie in [0, 1]");
    const double num = nb + config.n_ex * g / static_cast<double>(n);
    const double lp = num > 0 ? log_p.back() + std::log(num / (nb + 1)) : -INFINITY;
    log_p.push_back(lp);
    if (std::isfinite(lp)) {
      log_sum = std::max(log_sum, lp) + std::log1p(std::exp(-std::abs(log_sum - lp)));
    }
    const long count = n + 1;
    if (count >= min_length) {
      if (!std::isfinite(lp)) break;  // every later entry vanishes too
      // Worst case P = 1 beyond n: ratio bounded by rho.
      const double rho = (nb + config.n_ex / static_cast<double>(n + 1)) / (nb + 1);
      if (rho < 1 && std::exp(lp - log_sum) * rho / (1 - rho) < kTailTolerance) break;
    }
    if (n >= kMaxPhotonCeiling) {
      throw NonNormalizable("stationary distribution does not decay within 1e6 photons");
    }
  }
  PhotonDistribution d;
  d.p.reserve(log_p.size());
  for (double lp : log_p) d.p.push_back(std::exp(lp - log_sum));
  normalize(d.p);
  return d;
}

std::vector<double> master_equation_rhs(const std::vector<double>& p,
                                        const MicromaserConfig& config) {
  if (!config.pump_rate || !config.loss_rate) {
    throw std::invalid_argument("master equation needs pump_rate and loss_rate");
  }
  const double r = *config.pump_rate;
  const double gamma = *config.loss_rate;
  const double nb = config.n_b;
  const std::size_t size = p.size();
  std::vector<double> dp(size, 0.0);
  for (std::size_t n = 0; n + 1 < size; ++n) {
    const double up = static_cast<double>(n + 1);
    const double flux = r * config.gain(static_cast<int>(n)) * p[n] + gamma * nb * up * p[n] -
                        gamma * (nb + 1) * up * p[n + 1];
    dp[n] -= flux;
    dp[n + 1] += flux;
  }
  return dp;
}

PhotonDistribution evolve_master_equation(const PhotonDistribution& p0,
                                          const MicromaserConfig& config, double t_end) {
  config.validate();
  if (!config.pump_rate || !config.loss_rate) {
    throw std::invalid_argument("master equation needs pump_rate and loss_rate");
  }
  if (!(t_end >= 0)) throw std::invalid_argument("end time must be nonnegative");
  const std::size_t size = p0.p.size();
  const double r = *config.pump_rate;
  const double gamma = *config.loss_rate;
  const double nb = config.n_b;
  const double top = static_cast<double>(size);
  const double max_rate = r + gamma * (2 * nb + 1) * top;
  const auto steps = static_cast<long>(std::ceil(t_end * max_rate / 0.1));
  if (steps == 0) return p0;
  const double h = t_end / static_cast<double>(steps);

  // Cache the gain curve; the RHS evaluates it four times per step.
  std::vector<double> gain(size);
  for (std::size_t n = 0; n < size; ++n) gain[n] = config.gain(static_cast<int>(n));
  MicromaserConfig cached = config;
  cached.gain = [&gain](int n) { return gain[static_cast<std::size_t>(n)]; };

  std::vector<double> p = p0.p;
  std::vector<double> tmp(size);
  auto axpy = [&](const std::vector<double>& k, double c) {
    for (std::size_t i = 0; i < size; ++i) tmp[i] = p[i] + c * k[i];
    return tmp;
  };
  for (long s = 0; s < steps; ++s) {
    const auto k1 = master_equation_rhs(p, cached);
    const auto k2 = master_equation_rhs(axpy(k1, h / 2), cached);
    const auto k3 = master_equation_rhs(axpy(k2, h / 2), cached);
    const auto k4 = master_equation_rhs(axpy(k3, h), cached);
    for (std::size_t i = 0; i < size; ++i) {
      p[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      if (p[i] < -1e-12) {
        throw StepFailure("negative probability during master-equation step at t = " +
                          std::to_string(h * static_cast<double>(s + 1)));
      }
    }
  }
  return {p};
}

std::vector<int> distribution_peaks(const PhotonDistribution& dist, double rel_threshold) {
  const auto& p = dist.p;
  std::vector<int> peaks;
  if (p.size() < 3) return peaks;
  const double top = *std::max_element(p.begin(), p.end());
  for (std::size_t n = 1; n + 1 < p.size(); ++n) {
    if (p[n] > p[n - 1] && p[n] >= p[n + 1] && p[n] >= rel_threshold * top) {
      peaks.push_back(static_cast<int>(n));
    }
  }
  return peaks;
}

}  // namespace mazer
