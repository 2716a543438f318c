#include "mazer/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace mazer {

namespace {

using std::numbers::pi;

constexpr int kMaxDoublings = 8;

double potential_sign(Channel channel) { return channel == Channel::Plus ? -1.0 : 1.0; }

// Q(s) in phi'' + Q phi = 0.
struct Coefficient {
  double k2;
  double coupling;  // +/- (kappa_n L)^2
  const ModeProfile* profile;

  double operator()(double s) const { return k2 + coupling * (*profile)(s); }
};

Coefficient make_coefficient(const ScatteringParams& p) {
  const double kn = p.kappa_n_l();
  return {p.k_l * p.k_l, potential_sign(p.channel) * kn * kn, &p.profile};
}

double max_wavenumber(const ScatteringParams& p) {
  const double kn = p.kappa_n_l();
  return std::sqrt(p.k_l * p.k_l + kn * kn * p.profile.peak());
}

// Wrap an angle difference into (-pi/2, pi/2]; angles of (phi, phi') are defined mod pi.
double wrap_half(double d) {
  d = std::remainder(d, pi);
  if (d <= -pi / 2) d += pi;
  return d;
}

double clamp_beta(double beta) {
  if (std::isnan(beta)) return kMaxLogDerivative;
  return std::clamp(beta, -kMaxLogDerivative, kMaxLogDerivative);
}

struct Column {
  double phi;
  double dphi;
};

void renormalize(Column& c) {
  const double m = std::max(std::abs(c.phi), std::abs(c.dphi));
  if (m > kRenormalizeAbove) {
    c.phi /= m;
    c.dphi /= m;
  }
}

void check_finite(const Column& c, double s) {
  if (!std::isfinite(c.phi) || !std::isfinite(c.dphi)) {
    throw IntegrationError("non-finite state in channel integration", s);
  }
}

// Fourth-order Magnus propagation of two columns from s = 0 to s = -1/2.
std::array<Column, 2> magnus_propagate(const Coefficient& q, Column even, Column odd, long steps) {
  const double h = -kHalfWidth / static_cast<double>(steps);
  const double g1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double g2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double cfac = std::sqrt(3.0) / 12.0 * h * h;
  for (long i = 0; i < steps; ++i) {
    const double s = h * static_cast<double>(i);
    const double q1 = q(s + g1 * h);
    const double q2 = q(s + g2 * h);
    const double qbar = 0.5 * (q1 + q2);
    const double c = cfac * (q2 - q1);
    const double w2 = h * h * qbar - c * c;
    double cw;
    double sw;  // sin(w)/w
    if (w2 > 1e-12) {
      const double w = std::sqrt(w2);
      cw = std::cos(w);
      sw = std::sin(w) / w;
    } else if (w2 < -1e-12) {
      const double w = std::sqrt(-w2);
      cw = std::cosh(w);
      sw = std::sinh(w) / w;
    } else {
      cw = 1.0 - w2 / 2.0;
      sw = 1.0 - w2 / 6.0;
    }
    const double m00 = cw + sw * c;
    const double m01 = sw * h;
    const double m10 = -sw * h * qbar;
    const double m11 = cw - sw * c;
    for (Column* col : {&even, &odd}) {
      const double a = m00 * col->phi + m01 * col->dphi;
      const double b = m10 * col->phi + m11 * col->dphi;
      col->phi = a;
      col->dphi = b;
      renormalize(*col);
    }
    if ((i & 1023) == 0) {
      check_finite(even, s + h);
      check_finite(odd, s + h);
    }
  }
  check_finite(even, -kHalfWidth);
  check_finite(odd, -kHalfWidth);
  return {even, odd};
}

struct Angles {
  double even;
  double odd;
};

Angles angles_of(const std::array<Column, 2>& cols) {
  return {std::atan2(cols[0].dphi, cols[0].phi), std::atan2(cols[1].dphi, cols[1].phi)};
}

// RK4 on y = phi'/phi, or on w = 1/y while |y| is large.
double riccati_angle(const Coefficient& q, bool start_inverted, double scale, long steps) {
  const double h = -kHalfWidth / static_cast<double>(steps);
  bool inverted = start_inverted;
  double v = 0.0;
  const double hi = 2.0 * scale;
  const double lo = 0.5 * scale;
  auto f = [&](double s, double x) {
    const double qs = q(s);
    return inverted ? qs * x * x + 1.0 : -qs - x * x;
  };
  for (long i = 0; i < steps; ++i) {
    const double s = h * static_cast<double>(i);
    const double k1 = f(s, v);
    const double k2 = f(s + h / 2, v + h / 2 * k1);
    const double k3 = f(s + h / 2, v + h / 2 * k2);
    const double k4 = f(s + h, v + h * k3);
    v += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(v)) throw IntegrationError("non-finite Riccati state", s + h);
    if (!inverted && std::abs(v) > hi) {
      v = 1.0 / v;
      inverted = true;
    } else if (inverted && std::abs(v) > 1.0 / lo) {
      v = 1.0 / v;
      inverted = false;
    }
  }
  // angle of (1, y) or (w, 1)
  return inverted ? std::atan2(1.0, v) : std::atan(v);
}

template <class AngleFn>
LogDerivativePair richardson(long base, AngleFn angles) {
  long n = base;
  Angles coarse = angles(n);
  for (int d = 0; d <= kMaxDoublings; ++d) {
    const Angles fine = angles(2 * n);
    const double de = wrap_half(fine.even - coarse.even);
    const double dodd = wrap_half(fine.odd - coarse.odd);
    if (std::abs(de) <= kRichardsonTolerance && std::abs(dodd) <= kRichardsonTolerance) {
      return {clamp_beta(std::tan(fine.even + de / 15.0)),
              clamp_beta(std::tan(fine.odd + dodd / 15.0))};
    }
    coarse = fine;
    n *= 2;
  }
  throw IntegrationError("Richardson check did not converge after step doubling", -kHalfWidth);
}

}  // namespace

std::string_view channel_name(Channel channel) {
  return channel == Channel::Plus ? "plus" : "minus";
}

double rabi_wavenumber(double kappa_l, int n) {
  if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
  if (kappa_l < 0) throw std::invalid_argument("coupling wavenumber must be nonnegative");
  return kappa_l * std::pow(static_cast<double>(n) + 1.0, 0.25);
}

ScatteringParams ScatteringParams::at_coupling(ModeProfile profile, Channel channel, double k_l,
                                               double kappa_n_l) {
  ScatteringParams p;
  p.k_l = k_l;
  p.kappa_l = kappa_n_l;
  p.n = 0;
  p.channel = channel;
  p.profile = profile;
  return p;
}

void ScatteringParams::validate() const {
  if (!(k_l > 0) || !std::isfinite(k_l)) throw std::invalid_argument("kL must be positive");
  if (!(kappa_l >= 0) || !std::isfinite(kappa_l)) {
    throw std::invalid_argument("kappaL must be nonnegative");
  }
  if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
}

long base_step_count(const ScatteringParams& params) {
  const double steps = std::ceil(kHalfWidth * max_wavenumber(params) / kPhasePerStep);
  return std::max(8L, static_cast<long>(steps));
}

LogDerivativePair integrate_even_odd(const ScatteringParams& params) {
  params.validate();
  const Coefficient q = make_coefficient(params);
  return richardson(base_step_count(params), [&](long steps) {
    return angles_of(magnus_propagate(q, {1.0, 0.0}, {0.0, 1.0}, steps));
  });
}

LogDerivativePair integrate_even_odd_scaled(const ScatteringParams& params, double even_scale,
                                            double odd_scale, long steps) {
  params.validate();
  if (even_scale == 0.0 || odd_scale == 0.0) throw std::invalid_argument("scales must be nonzero");
  const Coefficient q = make_coefficient(params);
  const auto cols = magnus_propagate(q, {even_scale, 0.0}, {0.0, odd_scale}, steps);
  return {clamp_beta(cols[0].dphi / cols[0].phi), clamp_beta(cols[1].dphi / cols[1].phi)};
}

LogDerivativePair integrate_even_odd_riccati(const ScatteringParams& params) {
  params.validate();
  const Coefficient q = make_coefficient(params);
  const double scale = std::max(1.0, max_wavenumber(params));
  return richardson(2 * base_step_count(params), [&](long steps) {
    return Angles{riccati_angle(q, false, scale, steps), riccati_angle(q, true, scale, steps)};
  });
}

ChannelAmplitudes amplitudes_from_logderivs(const LogDerivativePair& beta, double k_l) {
  const Complex i(0.0, 1.0);
  const Complex phase = std::polar(1.0, -k_l);
  const Complex denom = (k_l - i * beta.even) * (k_l - i * beta.odd);
  const Complex r = (k_l * k_l + beta.even * beta.odd) / denom * phase;
  const Complex t = i * k_l * (beta.even - beta.odd) / denom * phase;
  return {r, t};
}

OutcomeProbabilities outcome_probabilities(const ChannelAmplitudes& plus,
                                           const ChannelAmplitudes& minus) {
  auto flush = [](double x) { return x < 1e-300 ? 0.0 : x; };
  return {flush(std::norm(plus.t + minus.t) / 4.0), flush(std::norm(plus.t - minus.t) / 4.0),
          flush(std::norm(plus.r + minus.r) / 4.0), flush(std::norm(plus.r - minus.r) / 4.0)};
}

ChannelAmplitudes transfer_matrix_oracle(const ScatteringParams& params, int slices) {
  params.validate();
  if (slices < 1) throw std::invalid_argument("slices must be at least 1");
  const Coefficient q = make_coefficient(params);
  const double k = params.k_l;
  const Complex i(0.0, 1.0);
  const double d = 1.0 / slices;
  // Transmitted wave e^{iKs} on the right edge, propagated leftward.
  Complex psi = std::polar(1.0, k / 2);
  Complex dpsi = i * k * psi;
  for (int j = slices - 1; j >= 0; --j) {
    const double mid = -kHalfWidth + (j + 0.5) * d;
    const double qj = q(mid);
    Complex a;
    Complex b;
    if (qj > 0) {
      const double w = std::sqrt(qj);
      const double c = std::cos(w * d);
      const double s = std::sin(w * d);
      a = psi * c - dpsi * (s / w);
      b = psi * (w * s) + dpsi * c;
    } else if (qj < 0) {
      const double w = std::sqrt(-qj);
      const double c = std::cosh(w * d);
      const double s = std::sinh(w * d);
      a = psi * c - dpsi * (s / w);
      b = -psi * (w * s) + dpsi * c;
    } else {
      a = psi - dpsi * d;
      b = dpsi;
    }
    psi = a;
    dpsi = b;
    const double mag = std::max(std::abs(psi), std::abs(dpsi));
    if (!std::isfinite(mag) || mag > 1e290) {
      throw OracleOverflow(
          "transfer-matrix oracle overflowed in an evanescent region; use the log-derivative "
          "integrator for this coupling");
    }
  }
  const Complex incident = std::polar(1.0, k / 2) * (psi + dpsi / (i * k)) / 2.0;
  const Complex reflected = std::polar(1.0, -k / 2) * (psi - dpsi / (i * k)) / 2.0;
  return {reflected / incident, 1.0 / incident};
}

ChannelAmplitudes solve_channel(const ScatteringParams& params) {
  return amplitudes_from_logderivs(integrate_even_odd(params), params.k_l);
}

}  // namespace mazer
