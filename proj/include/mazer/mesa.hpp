#pragma once

// Closed forms for the constant (mesa) mode.

#include <vector>

#include "mazer/scattering.hpp"

namespace mazer {

// Exact inside-solution log-derivatives at the left edge. Well channel (or the
// barrier channel above threshold): beta_e = q tan(q/2), beta_o = -q cot(q/2).
// Barrier below threshold: beta_e = -k' tanh(k'/2), beta_o = -k' coth(k'/2).
// Magnitudes are clamped to kMaxLogDerivative at poles.
LogDerivativePair mesa_logderivs_exact(Channel channel, double k_l, double kappa_n_l);

// Small-k forms with argument kappa_n L / 2 (k ignored inside the cavity).
LogDerivativePair mesa_logderivs_small_k(Channel channel, double kappa_n_l);

ChannelAmplitudes mesa_amplitudes(Channel channel, double k_l, double kappa_n_l);

// Exact |t_-|^2 maxima of the well channel sit at q L = j pi, i.e.
// kappa_n L = j pi / sqrt(1 + (k/kappa_n)^2), for j >= 1. Resonance j is the
// j-th in 0-based counting (the first, j = 0, would need q = 0).
std::vector<double> mesa_resonance_positions(double k_over_kappa_n, int j_first, int j_last);

}  // namespace mazer
