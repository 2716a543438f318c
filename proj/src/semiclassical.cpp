#include "mazer/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mazer/special_functions.hpp"

namespace mazer {

namespace {

using std::numbers::pi;

double clamp_beta(double beta) {
  if (std::isnan(beta)) return kMaxLogDerivative;
  return std::clamp(beta, -kMaxLogDerivative, kMaxLogDerivative);
}

// R = [A J'_{1/3} + B J'_{-1/3}] / [A J_{1/3} + B J_{-1/3}] at x.
double bessel_ratio(double a, double b, double x) {
  const BesselJ jp = bessel_j_third(ThirdOrder::Positive, x);
  const BesselJ jm = bessel_j_third(ThirdOrder::Negative, x);
  return (a * jp.derivative + b * jm.derivative) / (a * jp.value + b * jm.value);
}

void require_positive(double k_l, double kappa_n_l) {
  if (!(k_l > 0)) throw std::invalid_argument("kL must be positive");
  if (!(kappa_n_l > 0)) throw std::invalid_argument("kappa_n L must be positive");
}

}  // namespace

double xi_parameter(double k_l, double kappa_n_l) {
  require_positive(k_l, kappa_n_l);
  return pi * pi * kappa_n_l * kappa_n_l / (4.0 * k_l * k_l * k_l);
}

double wkb_phase(const ModeProfile& profile, double k_l, double kappa_n_l) {
  if (!(k_l > 0)) throw std::invalid_argument("kL must be positive");
  if (!(kappa_n_l >= 0)) throw std::invalid_argument("kappa_n L must be nonnegative");
  const double k2 = k_l * k_l;
  const double kn2 = kappa_n_l * kappa_n_l;
  if (profile.kind() == ProfileKind::Mesa) return kHalfWidth * std::sqrt(k2 + kn2);
  const double scale = std::sqrt(k2 + kn2 * profile.peak());
  return adaptive_quadrature([&](double s) { return std::sqrt(k2 + kn2 * profile(s)); },
                             -kHalfWidth, 0.0, 1e-14 * scale, SqrtEndpoint::Lower);
}

SemiclassicalPoint make_point(const ModeProfile& profile, double k_l, double kappa_n_l) {
  return {xi_parameter(k_l, kappa_n_l), wkb_phase(profile, k_l, kappa_n_l), kappa_n_l, k_l};
}

std::optional<double> barrier_exponent(const ModeProfile& profile, double k_l,
                                       double kappa_n_l) {
  require_positive(k_l, kappa_n_l);
  const auto a = profile.turning_point(k_l / kappa_n_l);
  if (!a) return std::nullopt;
  const double k2 = k_l * k_l;
  const double kn2 = kappa_n_l * kappa_n_l;
  if (profile.kind() == ProfileKind::Mesa) return std::sqrt(std::max(0.0, kn2 - k2));
  if (*a <= 0.0) return 0.0;
  const double half = adaptive_quadrature(
      [&](double s) { return std::sqrt(std::max(0.0, kn2 * profile(s) - k2)); }, -*a, 0.0,
      1e-14 * kappa_n_l, SqrtEndpoint::Lower);
  return 2.0 * half;
}

std::optional<double> barrier_penetration(const ModeProfile& profile, double k_l,
                                          double kappa_n_l) {
  const auto e = barrier_exponent(profile, k_l, kappa_n_l);
  if (!e) return std::nullopt;
  return std::exp(-*e);
}

LogDerivativePair barrier_logderivs(const ModeProfile& profile, double k_l, double kappa_n_l) {
  const auto theta = barrier_penetration(profile, k_l, kappa_n_l);
  if (!theta) throw std::domain_error("no turning point: the atom passes over the barrier");
  return {-k_l * (1.0 - *theta), -k_l * (1.0 + *theta)};
}

ChannelAmplitudes barrier_amplitudes(const ModeProfile& profile, double k_l, double kappa_n_l) {
  return amplitudes_from_logderivs(barrier_logderivs(profile, k_l, kappa_n_l), k_l);
}

LogDerivativePair edge_barrier_logderivs(const ModeProfile& profile, double k_l,
                                         double kappa_n_l) {
  const auto theta = barrier_penetration(profile, k_l, kappa_n_l);
  if (!theta) throw std::domain_error("no turning point: the atom passes over the barrier");
  const double xi = xi_parameter(k_l, kappa_n_l);
  const double x0 = 1.0 / (3.0 * xi);
  // Ai(-y) ~ J_{1/3} + J_{-1/3}, Bi(-y) ~ sqrt(3) (J_{-1/3} - J_{1/3}) up to common factors.
  const double mix = *theta / (2.0 * std::sqrt(3.0));
  const double even = -k_l * (xi + bessel_ratio(1.0 / 3.0 - mix, 1.0 / 3.0 + mix, x0));
  const double odd = -k_l * (xi + bessel_ratio(1.0 / 3.0 + mix, 1.0 / 3.0 - mix, x0));
  return {clamp_beta(even), clamp_beta(odd)};
}

double chi(double phi) {
  const double num = -std::sin(phi + pi / 12);
  const double den = std::cos(phi - pi / 12);
  if (den == 0.0) return std::copysign(INFINITY, num);
  return num / den;
}

LogDerivativePair airy_logderivs(const SemiclassicalPoint& point) {
  if (!(point.xi > 0)) throw std::invalid_argument("xi must be positive");
  const double x0 = point.edge_argument();
  const double ph = point.matching_phase();
  // (A, B) with A/B = chi(ph) and chi(ph + pi/2), written without the division.
  const double even =
      point.k_l * (point.xi + bessel_ratio(-std::sin(ph + pi / 12), std::cos(ph - pi / 12), x0));
  const double odd = point.k_l * (point.xi + bessel_ratio(-std::sin(ph + 7 * pi / 12),
                                                          std::cos(ph + 5 * pi / 12), x0));
  return {clamp_beta(even), clamp_beta(odd)};
}

LogDerivativePair small_xi_logderivs(const SemiclassicalPoint& point) {
  const double ph = point.interior_phase();
  const double k = point.k_l;
  return {clamp_beta(-k * (point.xi / 2 + std::tan(ph))),
          clamp_beta(-k * (point.xi / 2 - 1.0 / std::tan(ph)))};
}

ChannelAmplitudes small_xi_amplitudes(const SemiclassicalPoint& point) {
  const Complex i(0.0, 1.0);
  const double q = point.xi / 4;
  const double ph = point.interior_phase();
  const Complex denom = q * q * std::polar(1.0, -2 * ph) + (1.0 + i * q) * (1.0 + i * q) *
                                                             std::polar(1.0, 2 * ph);
  const Complex t = std::polar(1.0, -point.k_l) / denom;
  const Complex r =
      -i * (point.xi / 2) * (std::cos(2 * ph) - q * std::sin(2 * ph)) * t;
  return {r, t};
}

LogDerivativePair large_xi_logderivs(const SemiclassicalPoint& point) {
  const double a = gamma_constants().alpha * std::cbrt(point.xi);
  const double ph = point.matching_phase();
  return {clamp_beta(point.k_l * a * chi(ph)), clamp_beta(point.k_l * a * chi(ph + pi / 2))};
}

ChannelAmplitudes large_xi_amplitudes(const SemiclassicalPoint& point) {
  const Complex i(0.0, 1.0);
  const double a = gamma_constants().alpha * std::cbrt(point.xi);
  const double ph = point.matching_phase();
  const double s1 = std::sin(ph + pi / 12);
  const double c1 = std::cos(ph - pi / 12);
  const double s2 = std::sin(ph + 7 * pi / 12);
  const double c2 = std::cos(ph + 5 * pi / 12);
  const Complex phase = std::polar(1.0, -point.k_l);
  const Complex denom = (c1 + i * a * s1) * (c2 + i * a * s2);
  const Complex r = (c1 * c2 + a * a * s1 * s2) / denom * phase;
  const Complex t = i * a * (s2 * c1 - s1 * c2) / denom * phase;
  return {r, t};
}

WellApproximation resolve_well_approximation(WellApproximation requested, double xi) {
  if (requested != WellApproximation::Auto) return requested;
  if (xi <= kSmallXiBandEdge) return WellApproximation::SmallXi;
  if (xi < kLargeXiBandEdge) return WellApproximation::Airy;
  return WellApproximation::LargeXi;
}

ChannelAmplitudes well_amplitudes(const SemiclassicalPoint& point, WellApproximation approx) {
  switch (resolve_well_approximation(approx, point.xi)) {
    case WellApproximation::SmallXi:
      return small_xi_amplitudes(point);
    case WellApproximation::LargeXi:
      return large_xi_amplitudes(point);
    default:
      return amplitudes_from_logderivs(airy_logderivs(point), point.k_l);
  }
}

}  // namespace mazer
