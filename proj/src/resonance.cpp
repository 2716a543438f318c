#include "mazer/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "mazer/special_functions.hpp"

namespace mazer {

namespace {

using std::numbers::pi;

constexpr int kMaxOutsideSteps = 2000;

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

// x_below has f < level, x_above has f >= level.
double bisect_level(const std::function<double(double)>& f, double level, double x_below,
                    double x_above, double tol) {
  for (int it = 0; it < 200 && std::abs(x_above - x_below) > tol; ++it) {
    const double mid = 0.5 * (x_below + x_above);
    (f(mid) < level ? x_below : x_above) = mid;
  }
  return 0.5 * (x_below + x_above);
}

}  // namespace

double resonance_phase_integral(double k_over_kappa_n) {
  const double r2 = k_over_kappa_n * k_over_kappa_n;
  return adaptive_quadrature([&](double th) { return std::sqrt(r2 + pi / 2 * std::cos(th)); },
                             0.0, pi / 2, 1e-15, SqrtEndpoint::Upper);
}

std::vector<double> resonance_condition_roots(double k_over_kappa_n, int m_first, int m_last) {
  if (k_over_kappa_n < 0) throw std::invalid_argument("k/kappa_n must be nonnegative");
  const double scale = pi / resonance_phase_integral(k_over_kappa_n);
  std::vector<double> roots;
  for (int m = std::max(0, m_first); m <= m_last; ++m) {
    roots.push_back((m * pi / 2 + pi / 12) * scale);
  }
  return roots;
}

int nearest_condition_index(double k_over_kappa_n, double kappa_n_l) {
  const double lhs = kappa_n_l * resonance_phase_integral(k_over_kappa_n) / pi;
  return static_cast<int>(std::lround((lhs - pi / 12) / (pi / 2)));
}

std::vector<Peak> locate_peaks(const std::function<double(double)>& f, double lo, double hi,
                               const PeakSearch& search) {
  if (!(hi > lo)) throw std::invalid_argument("peak search window must be nonempty");
  if (!(search.step > 0)) throw std::invalid_argument("grid step must be positive");
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / search.step)) + 1;
  const std::size_t count = std::max<std::size_t>(n, 3);
  const double h = (hi - lo) / static_cast<double>(count - 1);
  std::vector<double> x(count);
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = lo + h * static_cast<double>(i);
  parallel_for(count, search.threads, [&](std::size_t i) { g[i] = f(x[i]); });

  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    if (!(g[i] > g[i - 1] && g[i] >= g[i + 1])) continue;
    std::size_t left = i;
    while (left > 0 && g[left - 1] <= g[left]) --left;
    std::size_t right = i;
    while (right + 1 < count && g[right + 1] <= g[right]) ++right;
    if (g[i] - std::max(g[left], g[right]) < search.min_prominence) continue;

    const double tol = search.position_rel_tol * std::max(1.0, std::abs(x[i]));
    const double pos = golden_max(f, x[i - 1], x[i + 1], tol);
    const double top = std::max(f(pos), g[i]);
    const double half = top / 2;
    const double btol = 1e-6 * h;

    // Half-maximum crossing on one side: dir = -1 (left) or +1 (right).
    auto crossing = [&](int dir) -> std::optional<double> {
      const std::size_t stop = dir < 0 ? left : right;
      std::size_t j = i;
      while (j != stop) {
        const std::size_t next = dir < 0 ? j - 1 : j + 1;
        if (g[next] < half) {
          const double above = g[j] >= half ? x[j] : pos;
          return bisect_level(f, half, x[next], above, btol);
        }
        j = next;
      }
      const bool at_edge = dir < 0 ? stop == 0 : stop == count - 1;
      if (!at_edge) return std::nullopt;
      double prev_x = x[stop];
      double prev_v = g[stop];
      for (int s = 1; s <= kMaxOutsideSteps; ++s) {
        const double xs = x[stop] + dir * h * s;
        if (xs <= 0) return std::nullopt;
        const double v = f(xs);
        if (v < half) return bisect_level(f, half, xs, prev_x, btol);
        if (v > prev_v) return std::nullopt;
        prev_x = xs;
        prev_v = v;
      }
      return std::nullopt;
    };
    const auto lx = crossing(-1);
    const auto rx = crossing(+1);
    double fwhm;
    if (lx && rx) {
      fwhm = *rx - *lx;
    } else if (lx) {
      fwhm = 2 * (pos - *lx);
    } else if (rx) {
      fwhm = 2 * (*rx - pos);
    } else {
      fwhm = x[right] - x[left];
    }
    peaks.push_back({pos, top, fwhm, lx && rx});
  }
  return peaks;
}

double default_expected_width(const ModeProfile& profile, double k_over_kappa_n) {
  const double mesa = 4.0 * k_over_kappa_n;
  return profile.kind() == ProfileKind::Sinusoidal ? 4.0 * mesa : mesa;
}

double well_transmission(const ModeProfile& profile, double k_over_kappa_n, double kappa_n_l,
                         Engine engine) {
  return std::norm(
      solve(profile, Channel::Minus, k_over_kappa_n * kappa_n_l, kappa_n_l, engine).amplitudes.t);
}

std::vector<ResonanceInfo> find_resonances(const ModeProfile& profile, double k_over_kappa_n,
                                           double window_lo, double window_hi,
                                           const ResonanceSearch& search) {
  if (!(k_over_kappa_n > 0)) throw std::invalid_argument("k/kappa_n must be positive");
  if (!(window_lo > 0) || !(window_hi > window_lo)) {
    throw std::invalid_argument("resonance window must be a nonempty positive interval");
  }
  if (!(search.points_per_width >= 2)) {
    throw std::invalid_argument("need at least two grid points per width");
  }
  const bool seeded = search.expected_width > 0;
  double width = seeded ? search.expected_width : default_expected_width(profile, k_over_kappa_n);
  auto f = [&](double kn) { return well_transmission(profile, k_over_kappa_n, kn, search.engine); };

  auto scan = [&](double w) {
    PeakSearch ps;
    ps.step = w / search.points_per_width;
    ps.threads = search.threads;
    return locate_peaks(f, window_lo, window_hi, ps);
  };
  std::vector<Peak> peaks = scan(width);
  if (!seeded) {
    // Re-estimate from what was found: rescan once if the seed was too wide.
    double narrowest = width;
    for (const Peak& p : peaks) {
      if (p.resolved) narrowest = std::min(narrowest, p.fwhm);
    }
    if (narrowest < 0.75 * width) {
      width = narrowest;
      peaks = scan(width);
    }
  }

  const double r = k_over_kappa_n;
  std::vector<ResonanceInfo> out;
  out.reserve(peaks.size());
  for (const Peak& p : peaks) {
    const auto sol = solve(profile, Channel::Minus, r * p.position, p.position, search.engine);
    const Parity parity =
        std::abs(sol.beta.even) <= std::abs(sol.beta.odd) ? Parity::Even : Parity::Odd;
    const int index = profile.kind() == ProfileKind::Mesa
                          ? static_cast<int>(std::lround(p.position * std::sqrt(1 + r * r) / pi))
                          : nearest_condition_index(r, p.position);
    out.push_back({p.position, p.fwhm, p.height, parity, index, p.height < 0.5, p.resolved});
  }

  if (profile.kind() == ProfileKind::Sinusoidal && search.check_condition_roots) {
    const double spacing = pi * pi / (2.0 * resonance_phase_integral(r));
    const int m_lo = std::max(0, nearest_condition_index(r, window_lo) - 1);
    const int m_hi = nearest_condition_index(r, window_hi) + 1;
    for (double root : resonance_condition_roots(r, m_lo, m_hi)) {
      if (root - window_lo < width || window_hi - root < width) continue;
      const bool found = std::any_of(out.begin(), out.end(), [&](const ResonanceInfo& info) {
        return std::abs(info.position - root) < spacing / 4;
      });
      if (!found) {
        std::ostringstream msg;
        msg << "no peak detected near the predicted resonance at kappa_n L = " << root
            << "; refine the grid (more points per width or a smaller expected width)";
        throw WindowTooCoarse(msg.str());
      }
    }
  }
  return out;
}

}  // namespace mazer
