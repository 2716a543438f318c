#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mazer/scattering.hpp"
#include "mazer/semiclassical.hpp"
#include "mazer/special_functions.hpp"

using namespace mazer;
using std::numbers::pi;

namespace {

const ModeProfile kSin = ModeProfile::sinusoidal();

SemiclassicalPoint synthetic(double xi, double phi, double k = 1.0) { return {xi, phi, 0.0, k}; }

double exact_well_t2(double k, double kn) {
  return std::norm(solve_channel(ScatteringParams::at_coupling(kSin, Channel::Minus, k, kn)).t);
}

}  // namespace

TEST_SUITE("semiclassical") {
  TEST_CASE("xi parameter") {
    CHECK(xi_parameter(1e3, 1e5) == doctest::Approx(24.674011).epsilon(1e-7));
    CHECK(xi_parameter(300 * pi, 30000 * pi) == doctest::Approx(pi * pi * 1e6 / (4 * 30000 * pi)).epsilon(1e-12));
    CHECK(xi_parameter(300 * pi, 30000 * pi) == doctest::Approx(26.18).epsilon(1e-3));
    CHECK(xi_parameter(7.0, 7.0) == doctest::Approx(pi * pi / 28).epsilon(1e-14));
    const auto p = make_point(kSin, 1e3, 1e5);
    CHECK(std::abs(p.xi - pi * pi * std::pow(1e5 / 1e3, 3) / (4 * 1e5)) < 1e-12 * p.xi);
  }

  TEST_CASE("WKB phase") {
    CHECK(wkb_phase(kSin, 3.0, 0.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(wkb_phase(ModeProfile::mesa(), 3.0, 4.0) == doctest::Approx(2.5).epsilon(1e-14));
    const double kn = 1000.0;
    CHECK(wkb_phase(kSin, 1e-9 * kn, kn) / kn == doctest::Approx(0.477988797486124995).epsilon(1e-10));
    // closed-form rewrite in the angle variable
    const double r = 0.01;
    const double direct = wkb_phase(kSin, r * 100 * pi, 100 * pi);
    const double angle = 100 * pi / pi *
                         adaptive_quadrature([&](double t) { return std::sqrt(r * r + pi / 2 * std::cos(t)); },
                                             0, pi / 2, 1e-15, SqrtEndpoint::Upper);
    CHECK(std::abs(direct - angle) < 1e-10);
  }

  TEST_CASE("barrier penetration") {
    // Deep barrier: total reflection.
    const auto a = barrier_amplitudes(kSin, 1.0, 200.0);
    CHECK(std::abs(std::abs(a.r) - 1) < 1e-12);
    CHECK(std::abs(a.r - Complex(0, -1) * std::polar(1.0, -1.0)) < 1e-12);
    // Exponent slope 2 * 0.47799 at small k/kappa_n.
    const double r = 1e-3;
    const double slope = (*barrier_exponent(kSin, r * 2000, 2000) - *barrier_exponent(kSin, r * 1000, 1000)) / 1000;
    CHECK(std::abs(slope - 0.955977594972249991) < 1e-3 * 0.956);
    CHECK(*barrier_exponent(kSin, 1e-8 * 10, 10) / 10 == doctest::Approx(0.955977594972249991).epsilon(1e-9));
    // Mesa: full-width integral of sqrt(kappa_n^2 - k^2).
    CHECK(*barrier_penetration(ModeProfile::mesa(), 0.01 * 30, 30) ==
          doctest::Approx(std::exp(-30 * std::sqrt(1 - 1e-4))).epsilon(1e-12));
    CHECK_FALSE(barrier_exponent(kSin, 10, 5).has_value());
    CHECK_THROWS_AS(barrier_amplitudes(kSin, 10, 5), std::domain_error);
    // |t_+| ~ Theta
    const auto b = barrier_amplitudes(kSin, 2.0, 20.0);
    CHECK(std::abs(b.t) == doctest::Approx(*barrier_penetration(kSin, 2.0, 20.0)).epsilon(1e-2));
  }

  TEST_CASE("edge-matched barrier tracks the integrator") {
    for (double kn : {300.0, 3000.0}) {
      for (double r : {0.01, 0.05}) {
        const auto exact = integrate_even_odd(ScatteringParams::at_coupling(kSin, Channel::Plus, r * kn, kn));
        const auto edge = edge_barrier_logderivs(kSin, r * kn, kn);
        CHECK(std::abs(edge.even - exact.even) < 1e-3 * std::abs(exact.even));
        CHECK(std::abs(edge.odd - exact.odd) < 1e-3 * std::abs(exact.odd));
      }
    }
  }

  TEST_CASE("chi") {
    CHECK(std::abs(chi(-pi / 12)) < 1e-16);
    CHECK(chi(pi / 12) == doctest::Approx(-0.5).epsilon(1e-15));
    const double phi = 0.3;
    const double sum = -(std::sin(phi + pi / 12) * std::cos(phi + pi / 2 - pi / 12) +
                         std::sin(phi + pi / 2 + pi / 12) * std::cos(phi - pi / 12)) /
                       (std::cos(phi - pi / 12) * std::cos(phi + 5 * pi / 12));
    CHECK(std::abs(chi(phi) + chi(phi + pi / 2) - sum) < 1e-12);
    CHECK(std::abs(chi(7 * pi / 12 - 1e-12)) > 1e10);
  }

  TEST_CASE("Bessel matching reduces to the small-xi form") {
    const auto b = airy_logderivs(synthetic(1e-3, 0.7));
    const auto s = small_xi_logderivs(synthetic(1e-3, 0.7));
    // interior phase is -Phi: beta_e / k = tan(Phi) - xi/2
    CHECK(s.even == doctest::Approx(std::tan(0.7) - 5e-4).epsilon(1e-14));
    CHECK(std::abs(b.even - s.even) < 0.01 * std::abs(s.even));
    CHECK(std::abs(b.odd - s.odd) < 0.01 * std::abs(s.odd));
  }

  TEST_CASE("Bessel matching reduces to the large-xi form") {
    const auto b = airy_logderivs(synthetic(1e3, 0.7));
    const auto l = large_xi_logderivs(synthetic(1e3, 0.7));
    const double expected = kGammaConstants.alpha * std::cbrt(1e3) * chi(-(0.7 + 1.0 / 3000));
    CHECK(l.even == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(b.even - l.even) < 0.01 * std::abs(l.even));
    CHECK(std::abs(b.odd - l.odd) < 0.01 * std::abs(l.odd));

    // At a physical point the matching corrections show up in the transmission.
    const auto p = make_point(kSin, 1e3, 1e5);
    const double tb = std::norm(amplitudes_from_logderivs(airy_logderivs(p), p.k_l).t);
    const double tl = std::norm(amplitudes_from_logderivs(large_xi_logderivs(p), p.k_l).t);
    CHECK(std::abs(tb - tl) < 0.02);
  }

  TEST_CASE("limit errors shrink toward their regimes") {
    double prev_small = INFINITY;
    for (double xi : {1e-1, 1e-2, 1e-3, 1e-4}) {
      double worst = 0;
      for (double phi = 0.05; phi < 3; phi += 0.1) {
        const auto b = airy_logderivs(synthetic(xi, phi));
        const auto s = small_xi_logderivs(synthetic(xi, phi));
        worst = std::max(worst, std::abs(std::atan(b.even) - std::atan(s.even)));
      }
      CHECK(worst < prev_small);
      prev_small = worst;
    }
    double prev_large = INFINITY;
    for (double xi : {1e1, 1e2, 1e3, 1e4}) {
      double worst = 0;
      for (double phi = 0.05; phi < 3; phi += 0.1) {
        const auto b = airy_logderivs(synthetic(xi, phi));
        const auto l = large_xi_logderivs(synthetic(xi, phi));
        worst = std::max(worst, std::abs(std::atan(b.even) - std::atan(l.even)));
      }
      CHECK(worst < prev_large);
      prev_large = worst;
    }
  }

  TEST_CASE("small-xi amplitudes") {
    const auto zero = small_xi_amplitudes(synthetic(0.0, 1.1));
    CHECK(std::abs(zero.r) < 1e-15);
    CHECK(std::abs(std::abs(zero.t) - 1) < 1e-15);
    const auto a = small_xi_amplitudes(synthetic(0.1, pi / 2));
    CHECK(std::abs(a.r) / std::abs(a.t) == doctest::Approx(0.05).epsilon(1e-12));
    for (double xi : {0.01, 0.05, 0.1}) {
      for (double phi = 0; phi < pi; phi += 0.05) {
        const auto c = small_xi_amplitudes(synthetic(xi, phi));
        CHECK(std::abs(std::norm(c.r) + std::norm(c.t) - 1) < xi * xi);
      }
    }
    // The closed forms agree with the log-derivatives they summarise.
    const auto pt = synthetic(0.02, 0.9, 3.0);
    const auto via = amplitudes_from_logderivs(small_xi_logderivs(pt), 3.0);
    const auto direct = small_xi_amplitudes(pt);
    CHECK(std::abs(via.t - direct.t) < 1e-3);
  }

  TEST_CASE("large-xi amplitudes") {
    for (double xi : {2.0, 10.0, 24.67, 1e3}) {
      for (double phi = 0; phi < pi; phi += 0.01) {
        const auto c = large_xi_amplitudes(synthetic(xi, phi, 2.0));
        CHECK(std::abs(std::norm(c.r) + std::norm(c.t) - 1) < 1e-10);
        const auto via = amplitudes_from_logderivs(large_xi_logderivs(synthetic(xi, phi, 2.0)), 2.0);
        CHECK(std::abs(via.t - c.t) < 1e-8);
      }
    }
    // chi(matching phase) = 0: the even log-derivative vanishes.
    const double xi = 24.67;
    const double w0 = 1 / (3 * xi);
    const double phi_res = pi / 12 + pi - w0;
    const auto res = large_xi_amplitudes(synthetic(xi, phi_res));
    const double bo = kGammaConstants.alpha * std::cbrt(xi) * chi(-(phi_res + w0) + pi / 2);
    const Complex expected = std::polar(1.0, -1.0) * Complex(0, -bo) / Complex(1, -bo);
    CHECK(std::abs(res.t - expected) < 1e-12);
    // the two branches never coincide, so transmission stays bounded away from zero
    double lowest = 1;
    for (double phi = 0; phi < pi; phi += 1e-4) {
      lowest = std::min(lowest, std::norm(large_xi_amplitudes(synthetic(xi, phi)).t));
    }
    CHECK(lowest > 0);
    // pole of chi: still finite
    const auto pole = large_xi_amplitudes(synthetic(xi, -(7 * pi / 12) - w0 + pi));
    CHECK(std::isfinite(std::abs(pole.t)));
  }

  TEST_CASE("agreement with exact numerics in both regimes") {
    // xi <= 0.05
    for (double kn : {100.0, 400.0, 1000.0}) {
      for (double xi : {0.002, 0.01, 0.05}) {
        const double k = std::cbrt(pi * pi * kn * kn / (4 * xi));
        const auto p = make_point(kSin, k, kn);
        CHECK(std::abs(std::norm(small_xi_amplitudes(p).t) - exact_well_t2(k, kn)) < 0.02);
      }
    }
    // xi >= 10
    for (double kn : {300.0, 2000.0, 8000.0}) {
      for (double xi : {10.0, 50.0, 500.0}) {
        const double k = std::cbrt(pi * pi * kn * kn / (4 * xi));
        const auto p = make_point(kSin, k, kn);
        CHECK(std::abs(std::norm(large_xi_amplitudes(p).t) - exact_well_t2(k, kn)) < 0.05);
      }
    }
  }

  TEST_CASE("auto band selection") {
    CHECK(resolve_well_approximation(WellApproximation::Auto, 0.1) == WellApproximation::SmallXi);
    CHECK(resolve_well_approximation(WellApproximation::Auto, 1.0) == WellApproximation::Airy);
    CHECK(resolve_well_approximation(WellApproximation::Auto, 7.0) == WellApproximation::LargeXi);
    CHECK(resolve_well_approximation(WellApproximation::Airy, 100.0) == WellApproximation::Airy);
  }
}
