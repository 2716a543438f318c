#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mazer/resonance.hpp"
#include "mazer/special_functions.hpp"

using namespace mazer;
using std::numbers::pi;

TEST_SUITE("resonance_finder") {
  TEST_CASE("phase integral and condition roots") {
    const double i0 = resonance_phase_integral(0.0);
    CHECK(pi / i0 == doctest::Approx(2.0920).epsilon(1e-4));
    CHECK(i0 == doctest::Approx(0.477988797486124995 * pi * 1.0).epsilon(1e-10));
    const auto roots = resonance_condition_roots(1e-4, 0, 3);
    REQUIRE(roots.size() == 4);
    CHECK(roots[0] == doctest::Approx(pi / 12 * pi / resonance_phase_integral(1e-4)).epsilon(1e-12));
    CHECK(roots[0] == doctest::Approx(0.5477).epsilon(1e-3));
    CHECK((roots[1] - roots[0]) / pi == doctest::Approx(1.046).epsilon(1e-3));
    CHECK(nearest_condition_index(1e-4, roots[2] + 0.3) == 2);
    CHECK(nearest_condition_index(0.01, 0.0) == 0);
    // I(r) grows with r, pulling the roots down
    CHECK(resonance_phase_integral(0.1) > resonance_phase_integral(0.01));
  }

  TEST_CASE("locate_peaks on analytic Lorentzians") {
    auto lor = [](double x0, double w) {
      return [=](double x) { return 1.0 / (1.0 + std::pow(2 * (x - x0) / w, 2)); };
    };
    auto f = [&](double x) { return lor(1.3, 0.2)(x) + 0.5 * lor(4.0, 0.05)(x); };
    const auto peaks = locate_peaks(f, 0, 5, {.step = 0.005});
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].position == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(peaks[0].fwhm == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(peaks[1].position == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(peaks[1].height == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(peaks[1].fwhm == doctest::Approx(0.05).epsilon(2e-2));
    CHECK(peaks[0].resolved);
    // maxima on the window edge are not peaks
    CHECK(locate_peaks(lor(0, 1), 0, 3, {.step = 0.01}).empty());
    CHECK(locate_peaks([](double) { return 0.3; }, 0, 1, {.step = 0.01}).empty());
  }

  TEST_CASE("mesa resonance near 3 pi") {
    const auto res = find_resonances(ModeProfile::mesa(), 0.01, 2.5 * pi, 3.5 * pi);
    REQUIRE(res.size() == 1);
    CHECK(res[0].index == 3);
    CHECK(std::abs(res[0].position - 3 * pi) < 0.01);
    CHECK(res[0].fwhm == doctest::Approx(0.04).epsilon(0.2));
    CHECK(res[0].peak == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(res[0].shallow);
    CHECK(res[0].parity == Parity::Odd);
  }

  TEST_CASE("sinusoid resonances sit on the condition roots") {
    const double r = 0.01;
    const auto res = find_resonances(ModeProfile::sinusoidal(), r, 100 * pi, 104 * pi);
    REQUIRE(res.size() == 4);
    for (std::size_t i = 0; i < res.size(); ++i) {
      const auto root = resonance_condition_roots(r, res[i].index, res[i].index)[0];
      CHECK(std::abs(res[i].position - root) < res[i].fwhm / 10);
      CHECK(res[i].fwhm > 0.04);
      CHECK(res[i].resolved);
      if (i > 0) {
        CHECK(res[i].index == res[i - 1].index + 1);
        CHECK(res[i].parity != res[i - 1].parity);
      }
    }
  }

  TEST_CASE("sinusoid widths grow with coupling") {
    ResonanceSearch s;
    const auto low = find_resonances(ModeProfile::sinusoidal(), 0.01, 100 * pi, 101.5 * pi, s);
    const auto high = find_resonances(ModeProfile::sinusoidal(), 0.01, 300 * pi, 301.5 * pi, s);
    REQUIRE(!low.empty());
    REQUIRE(!high.empty());
    CHECK(high.front().fwhm > low.front().fwhm);
  }

  TEST_CASE("width is stable under grid refinement") {
    ResonanceSearch coarse;
    ResonanceSearch fine;
    fine.points_per_width = 50;
    const auto a = find_resonances(ModeProfile::sinusoidal(), 0.01, 100 * pi, 101.2 * pi, coarse);
    const auto b = find_resonances(ModeProfile::sinusoidal(), 0.01, 100 * pi, 101.2 * pi, fine);
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(std::abs(a[0].fwhm - b[0].fwhm) < 0.01 * b[0].fwhm);
    CHECK(std::abs(a[0].position - b[0].position) < 1e-6);
  }

  TEST_CASE("too coarse a grid is reported") {
    ResonanceSearch s;
    s.expected_width = 8.0;
    s.points_per_width = 2;
    CHECK_THROWS_AS(find_resonances(ModeProfile::sinusoidal(), 0.01, 100 * pi, 160 * pi, s),
                    WindowTooCoarse);
  }

  TEST_CASE("empty and inverted windows") {
    CHECK(find_resonances(ModeProfile::mesa(), 0.01, 3.1 * pi, 3.3 * pi).empty());
    CHECK_THROWS_AS(find_resonances(ModeProfile::mesa(), 0.01, 4.0, 3.0), std::invalid_argument);
  }
}
