#pragma once

// Transmission resonances of the well channel as functions of kappa_n L at a
// fixed ratio k/kappa_n.

#include <functional>
#include <stdexcept>
#include <vector>

#include "mazer/engine.hpp"
#include "mazer/mode_profile.hpp"

namespace mazer {

enum class Parity { Even, Odd };

struct ResonanceInfo {
  double position;  // kappa_n L at the |t_-|^2 maximum
  double fwhm;      // in kappa_n L
  double peak;      // |t_-|^2 at the maximum
  Parity parity;    // which log-derivative vanishes
  int index;        // m (sinusoid) or j (mesa), 0-based
  bool shallow;     // peak below 1/2
  bool resolved;    // both half-maximum crossings found before a neighbouring minimum
};

// int_0^{pi/2} sqrt(r^2 + (pi/2) cos theta) d theta
double resonance_phase_integral(double k_over_kappa_n);

// Roots of (kappa_n L / pi) I(k/kappa_n) = m pi/2 + pi/12 for m in [m_first, m_last].
std::vector<double> resonance_condition_roots(double k_over_kappa_n, int m_first, int m_last);

// Index m of the condition root nearest to a given kappa_n L.
int nearest_condition_index(double k_over_kappa_n, double kappa_n_l);

struct Peak {
  double position;
  double height;
  double fwhm;
  bool resolved;
};

struct PeakSearch {
  double step;                    // grid spacing
  double min_prominence = 1e-6;   // ignore wiggles smaller than this (absolute)
  double position_rel_tol = 1e-9;
  unsigned threads = 0;
};

// Grid scan of f on [lo, hi], golden-section refinement of each interior
// local maximum and bisection on the two half-maximum crossings.
std::vector<Peak> locate_peaks(const std::function<double(double)>& f, double lo, double hi,
                               const PeakSearch& search);

class WindowTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResonanceSearch {
  Engine engine = Engine::ExactNumeric;
  double points_per_width = 25.0;
  // Seed width in kappa_n L. Defaults to 4 k/kappa_n, times 4 for the sinusoid.
  double expected_width = 0.0;
  // Sinusoid only: require a detected peak near every condition root in the window.
  bool check_condition_roots = true;
  unsigned threads = 0;
};

double default_expected_width(const ModeProfile& profile, double k_over_kappa_n);

// |t_-|^2 at kappa_n L with kL = (k/kappa_n) kappa_n L.
double well_transmission(const ModeProfile& profile, double k_over_kappa_n, double kappa_n_l,
                         Engine engine);

std::vector<ResonanceInfo> find_resonances(const ModeProfile& profile, double k_over_kappa_n,
                                           double window_lo, double window_hi,
                                           const ResonanceSearch& search = {});

}  // namespace mazer
