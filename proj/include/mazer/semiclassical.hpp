#pragma once

// WKB barrier penetration, WKB well interior, and the linear-turning-point
// (Bessel J_{+-1/3}) matching at the cavity edges.
//
// Phase conventions: `phi` is the positive half-cavity action
// Phi = int_{-L/2}^{0} sqrt(k^2 + kappa_n^2 u) dz. The connection formulas are
// written in terms of the signed phase accumulated going from the centre to the
// left edge, which is -Phi; the Bessel matching additionally absorbs the edge
// offset w0 = 1/(3 xi), giving the matching phase -(Phi + w0).

#include <optional>

#include "mazer/mode_profile.hpp"
#include "mazer/scattering.hpp"

namespace mazer {

struct SemiclassicalPoint {
  double xi;
  double phi;  // positive half-cavity WKB phase
  double kappa_n_l;
  double k_l;

  // Signed phase for the interior connection (small-xi forms).
  [[nodiscard]] double interior_phase() const { return -phi; }
  // Phase entering chi() for the edge matching: -(Phi + 1/(3 xi)).
  [[nodiscard]] double matching_phase() const { return -(phi + 1.0 / (3.0 * xi)); }
  // Bessel argument at the edge.
  [[nodiscard]] double edge_argument() const { return 1.0 / (3.0 * xi); }
};

// pi^2 (kappa_n/k)^3 / (4 kappa_n L)
double xi_parameter(double k_l, double kappa_n_l);

// int_{-1/2}^{0} sqrt(K^2 + Kn^2 u(s)) ds
double wkb_phase(const ModeProfile& profile, double k_l, double kappa_n_l);

SemiclassicalPoint make_point(const ModeProfile& profile, double k_l, double kappa_n_l);

// int_{-a}^{a} sqrt(Kn^2 u - K^2) ds over the classically forbidden region, or
// nullopt when the atom passes over the barrier.
std::optional<double> barrier_exponent(const ModeProfile& profile, double k_l, double kappa_n_l);

// Theta = exp(-barrier_exponent)
std::optional<double> barrier_penetration(const ModeProfile& profile, double k_l,
                                          double kappa_n_l);

// beta_{e,o} = -k (1 -/+ Theta). Throws std::domain_error without a turning point.
LogDerivativePair barrier_logderivs(const ModeProfile& profile, double k_l, double kappa_n_l);
ChannelAmplitudes barrier_amplitudes(const ModeProfile& profile, double k_l, double kappa_n_l);

// Barrier channel with the edge matched to Ai +/- (Theta/2) Bi on the linear
// slope of a vanishing profile. Throws std::domain_error without a turning point.
LogDerivativePair edge_barrier_logderivs(const ModeProfile& profile, double k_l,
                                         double kappa_n_l);

// -sin(phi + pi/12) / cos(phi - pi/12); +-infinity at the pole.
double chi(double phi);

// Well channel: beta = k (xi + R(w0)) with
// R = [A J'_{1/3} + B J'_{-1/3}] / [A J_{1/3} + B J_{-1/3}] at w0 = 1/(3 xi).
LogDerivativePair airy_logderivs(const SemiclassicalPoint& point);

// Interior WKB with first-order edge correction.
LogDerivativePair small_xi_logderivs(const SemiclassicalPoint& point);
ChannelAmplitudes small_xi_amplitudes(const SemiclassicalPoint& point);

// Leading small-argument Bessel behaviour: beta = alpha k xi^{1/3} chi(...).
LogDerivativePair large_xi_logderivs(const SemiclassicalPoint& point);
// Evaluated in the form with both chi denominators cleared, so chi poles are harmless.
ChannelAmplitudes large_xi_amplitudes(const SemiclassicalPoint& point);

enum class WellApproximation { SmallXi, Airy, LargeXi, Auto };

inline constexpr double kSmallXiBandEdge = 0.2;
inline constexpr double kLargeXiBandEdge = 5.0;

// Resolves Auto by xi: small-xi form up to 0.2, full Bessel matching up to 5,
// large-xi form above.
WellApproximation resolve_well_approximation(WellApproximation requested, double xi);

ChannelAmplitudes well_amplitudes(const SemiclassicalPoint& point,
                                  WellApproximation approx = WellApproximation::Auto);

}  // namespace mazer
