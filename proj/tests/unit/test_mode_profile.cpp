#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mazer/mode_profile.hpp"

using namespace mazer;
using std::numbers::pi;

TEST_SUITE("mode_profiles") {
  TEST_CASE("evaluate_profile reference values") {
    CHECK(evaluate_profile(ModeProfile::mesa(), 0.25) == 1.0);
    CHECK(evaluate_profile(ModeProfile::mesa(), 0.5) == 1.0);  // edge takes the inside value
    CHECK(evaluate_profile(ModeProfile::mesa(), 0.5000001) == 0.0);
    CHECK(evaluate_profile(ModeProfile::sinusoidal(), 0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(evaluate_profile(ModeProfile::sinusoidal(), 0.5) == 0.0);
    CHECK(evaluate_profile(ModeProfile::sinusoidal(), 0.75) == 0.0);
    CHECK(evaluate_profile(ModeProfile::sinusoidal(), -3.0) == 0.0);
  }

  TEST_CASE("profiles are even and nonnegative") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> z(-1.0, 1.0);
    for (auto p : {ModeProfile::mesa(), ModeProfile::sinusoidal()}) {
      for (int i = 0; i < 2000; ++i) {
        const double s = z(rng);
        CHECK(p(s) == p(-s));
        CHECK(p(s) >= 0.0);
      }
    }
  }

  TEST_CASE("unit area to 1e-10") {
    CHECK(std::abs(profile_area(ModeProfile::mesa()) - 1.0) < 1e-10);
    CHECK(std::abs(profile_area(ModeProfile::sinusoidal()) - 1.0) < 1e-10);
  }

  TEST_CASE("names round-trip") {
    CHECK(ModeProfile::from_name("mesa") == ModeProfile::mesa());
    CHECK(ModeProfile::from_name("sinusoidal") == ModeProfile::sinusoidal());
    CHECK(ModeProfile::from_name(ModeProfile::sinusoidal().name()) == ModeProfile::sinusoidal());
    CHECK_THROWS_AS(ModeProfile::from_name("sech2"), std::invalid_argument);
  }

  TEST_CASE("turning points") {
    const auto sin = ModeProfile::sinusoidal();
    CHECK(*sin.turning_point(1e-9) == doctest::Approx(0.5).epsilon(1e-12));
    // arccos is ill-conditioned at 1: sqrt(eps) absolute
    CHECK(std::abs(*sin.turning_point(std::sqrt(pi / 2))) < 1e-7);
    // arccos(2e-4/pi)/pi, evaluated in 30-digit arithmetic
    CHECK(std::abs(*sin.turning_point(0.01) - 0.499979735763257844) < 1e-15);
    CHECK_FALSE(sin.turning_point(1.3).has_value());
    CHECK(*ModeProfile::mesa().turning_point(0.3) == 0.5);
    CHECK_FALSE(ModeProfile::mesa().turning_point(1.01).has_value());
    CHECK_THROWS_AS((void)sin.turning_point(-0.1), std::invalid_argument);
  }

  TEST_CASE("turning point is nonincreasing in k/kappa_n") {
    for (auto p : {ModeProfile::mesa(), ModeProfile::sinusoidal()}) {
      double prev = 1.0;
      for (double r = 0.0; r < 1.3; r += 1e-3) {
        const auto a = p.turning_point(r);
        if (!a) break;
        CHECK(*a <= prev);
        prev = *a;
      }
    }
  }
}
