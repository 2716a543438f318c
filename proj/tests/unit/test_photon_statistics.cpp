#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "mazer/photon_statistics.hpp"

using namespace mazer;
using std::numbers::pi;

namespace {

MicromaserConfig make(double n_ex, double n_b, GainFunction g, double loss = 1.0) {
  MicromaserConfig c;
  c.n_ex = n_ex;
  c.n_b = n_b;
  c.gain = std::move(g);
  c.loss_rate = loss;
  c.pump_rate = n_ex * loss;
  return c;
}

double thermal(double n_b, int n) { return std::pow(n_b, n) / std::pow(n_b + 1, n + 1); }

}  // namespace

TEST_SUITE("photon_statistics") {
  TEST_CASE("field weights") {
    const auto num = field_weights(FieldState::number(3));
    REQUIRE(num.size() == 4);
    CHECK(num[3] == 1.0);
    CHECK(num[0] == 0.0);

    const auto coh = field_weights(FieldState::coherent(0.25));
    CHECK(coh[0] == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
    CHECK(coh[1] == doctest::Approx(0.25 * std::exp(-0.25)).epsilon(1e-12));
    CHECK(coh[2] == doctest::Approx(0.03125 * std::exp(-0.25)).epsilon(1e-12));
    CHECK(std::accumulate(coh.begin(), coh.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // dropped Poisson tail below the tolerance
    double tail = 0;
    double term = std::exp(-0.25);
    for (std::size_t n = 1; n < coh.size() + 40; ++n) {
      term *= 0.25 / static_cast<double>(n);
      if (n >= coh.size()) tail += term;
    }
    CHECK(tail < kTailTolerance);

    const auto th = field_weights(FieldState::thermal(1.0));
    CHECK(th[0] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(th[1] == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(std::pow(0.5, static_cast<double>(th.size())) < kTailTolerance);

    const auto vac = field_weights(FieldState::coherent(0.0));
    CHECK(vac[0] == 1.0);
    FieldState padded = FieldState::coherent(0.25);
    padded.truncation = 50;
    CHECK(field_weights(padded).size() >= 51);
    CHECK_THROWS_AS(field_weights(FieldState::coherent(-1)), std::invalid_argument);
  }

  TEST_CASE("ensemble average") {
    CHECK(ensemble_average({0.5, 0.5}, {1.0, 3.0}) == 2.0);
    CHECK_THROWS_AS(ensemble_average({1.0}, {1.0, 2.0}), std::invalid_argument);
  }

  TEST_CASE("conventional emission") {
    CHECK(conventional_rabi_angle(2.0, 4.0) == doctest::Approx(4.0));
    CHECK(conventional_emission(pi / 2) == doctest::Approx(1.0));
    CHECK(std::abs(conventional_emission(pi)) < 1e-30);
    CHECK(conventional_emission(pi / 4) == doctest::Approx(0.5));
  }

  TEST_CASE("zero gain gives the thermal distribution") {
    const auto d = steady_state_distribution(make(100, 0.7, [](int) { return 0.0; }));
    for (int n = 0; n < 30; ++n) CHECK(d.p[n] == doctest::Approx(thermal(0.7, n)).epsilon(1e-12));
    CHECK(d.mean() == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("weak pumping approaches thermal") {
    const auto d = steady_state_distribution(make(1e-8, 1.0, [](int n) { return 1.0 / (n + 1.0); }));
    double kl = 0;
    for (std::size_t n = 0; n < d.p.size(); ++n) {
      if (d.p[n] > 0) kl += d.p[n] * std::log(d.p[n] / thermal(1.0, static_cast<int>(n)));
    }
    CHECK(std::abs(kl) < 1e-12);
  }

  TEST_CASE("stationary solution satisfies detailed balance and the master equation") {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> u(0, 1);
    for (int draw = 0; draw < 50; ++draw) {
      const double n_ex = std::pow(10.0, 3 * u(rng));
      const double n_b = 2 * u(rng);
      const double w = 0.5 + 3 * u(rng);
      const double phase = 2 * pi * u(rng);
      auto gain = [=](int n) { return std::pow(std::sin(w * std::sqrt(n + 1.0) + phase), 2); };
      const auto c = make(n_ex, n_b, gain, 0.3);
      const auto d = steady_state_distribution(c);
      CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
      const auto rhs = master_equation_rhs(d.p, c);
      const double max_rate = *c.pump_rate + *c.loss_rate * (n_b + 1) * static_cast<double>(d.p.size());
      double worst = 0;
      for (double x : rhs) worst = std::max(worst, std::abs(x));
      CHECK(worst < 1e-10 * max_rate);
      // zero net flux between neighbours
      for (std::size_t n = 0; n + 1 < d.p.size(); n += 7) {
        const double up = *c.pump_rate * gain(static_cast<int>(n)) * d.p[n] +
                          *c.loss_rate * n_b * (n + 1.0) * d.p[n];
        const double down = *c.loss_rate * (n_b + 1) * (n + 1.0) * d.p[n + 1];
        CHECK(std::abs(up - down) <= 1e-10 * std::max(up, 1e-300) + 1e-300);
      }
    }
  }

  TEST_CASE("peaks of a two-hump distribution") {
    PhotonDistribution d{{0.1, 0.3, 0.1, 0.05, 0.2, 0.1, 1e-6, 2e-6, 1e-6}};
    CHECK(distribution_peaks(d) == std::vector<int>{1, 4});
    CHECK(distribution_peaks(d, 0.0) == std::vector<int>{1, 4, 7});
    CHECK(distribution_peaks(PhotonDistribution{{0.5, 0.3, 0.2}}).empty());
  }

  TEST_CASE("time evolution") {
    auto gain = [](int n) { return std::pow(std::sin(2.0 * std::sqrt(n + 1.0)), 2); };
    const auto c = make(5, 0.5, gain);
    const auto st = steady_state_distribution(c, 80);
    const auto same = evolve_master_equation(st, c, 5.0);
    double drift = 0;
    for (std::size_t n = 0; n < st.p.size(); ++n) drift = std::max(drift, std::abs(same.p[n] - st.p[n]));
    CHECK(drift < 1e-9);

    PhotonDistribution vac{std::vector<double>(st.p.size(), 0.0)};
    vac.p[0] = 1;
    const auto relaxed = evolve_master_equation(vac, c, 50.0);
    double l1 = 0;
    for (std::size_t n = 0; n < st.p.size(); ++n) l1 += std::abs(relaxed.p[n] - st.p[n]);
    CHECK(l1 < 1e-6);
    CHECK(relaxed.total() == doctest::Approx(1.0).epsilon(1e-12));

    // loss only relaxes a number state to the thermal state
    const auto cold = make(0, 0.3, [](int) { return 0.0; });
    PhotonDistribution three{std::vector<double>(60, 0.0)};
    three.p[3] = 1;
    const auto th = evolve_master_equation(three, cold, 60.0);
    for (int n = 0; n < 10; ++n) CHECK(std::abs(th.p[n] - thermal(0.3, n)) < 1e-8);

    MicromaserConfig no_rates;
    no_rates.gain = gain;
    CHECK_THROWS_AS(evolve_master_equation(st, no_rates, 1.0), std::invalid_argument);
  }

  TEST_CASE("validation and failure modes") {
    CHECK_THROWS_AS(steady_state_distribution(make(1e7, 0, [](int) { return 1.0; })), NonNormalizable);
    auto bad = make(10, 1, [](int) { return 0.5; });
    bad.pump_rate = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(steady_state_distribution(make(-1, 1, [](int) { return 0.5; })), std::invalid_argument);
    CHECK_THROWS_AS(steady_state_distribution(make(1, 1, [](int) { return 1.5; })), std::invalid_argument);
  }
}
