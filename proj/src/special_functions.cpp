#include "mazer/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace mazer {

namespace {

constexpr double kThird = 1.0 / 3.0;

bool near(double a, double b) { return std::fabs(a - b) < 1e-14; }

// Gamma(nu + 1) with the orders we actually use served from the constants.
long double gamma_of_order_plus_one(double nu) {
  const auto& g = kGammaConstants;
  if (near(nu, kThird)) return g.gamma_four_thirds;
  if (near(nu, -kThird)) return g.gamma_two_thirds;
  if (near(nu, 2.0 * kThird)) return 2.0L * g.gamma_two_thirds / 3.0L;       // Gamma(5/3)
  if (near(nu, 4.0 * kThird)) return 4.0L * g.gamma_four_thirds / 3.0L;      // Gamma(7/3)
  return lanczos_gamma(nu + 1.0);
}

// Hankel expansion J_nu(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi).
double hankel_j(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double previous = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double mag = std::fabs(term);
    if (mag > previous) break;  // asymptotic series starts to diverge
    previous = mag;
    const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
    if (k % 2 == 0) {
      p += signed_term;
    } else {
      q += signed_term;
    }
    if (mag < 1e-18) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

BesselJ bessel_j_series(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j_series: x must be positive");
  const long double half = 0.5L * x;
  const long double half_sq = half * half;
  long double term = std::pow(half, static_cast<long double>(nu)) / gamma_of_order_plus_one(nu);
  long double sum = term;
  long double dsum = term * nu;
  for (int k = 1; k < 400; ++k) {
    term *= -half_sq / (static_cast<long double>(k) * (k + nu));
    sum += term;
    dsum += term * (2.0L * k + nu);
    if (k > half && std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return {static_cast<double>(sum), static_cast<double>(dsum / x)};
}

BesselJ bessel_j_asymptotic(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j_asymptotic: x must be positive");
  const double j = hankel_j(nu, x);
  const double j_next = hankel_j(nu + 1.0, x);
  return {j, nu / x * j - j_next};
}

BesselJ bessel_j_third(ThirdOrder order, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j_third: x must be positive");
  const double nu = order == ThirdOrder::Positive ? kThird : -kThird;
  return x < kBesselCrossover ? bessel_j_series(nu, x) : bessel_j_asymptotic(nu, x);
}

double lanczos_gamma(double x) {
  static constexpr std::array<double, 9> coef{
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = coef[0];
  for (std::size_t i = 1; i < coef.size(); ++i) a += coef[i] / (x + static_cast<double>(i));
  const double t = x + g + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5, 7 of the Kronrod set.
constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

double adaptive_plain(const Integrand& f, double a, double b, double tol) {
  constexpr int kMaxPanels = 5000;
  std::priority_queue<Panel> panels;
  panels.push(gauss_kronrod(f, a, b));
  double total = panels.top().value;
  double error = panels.top().error;
  int count = 1;
  while (!(error <= tol)) {
    if (count >= kMaxPanels || !std::isfinite(error)) {
      throw QuadratureError("adaptive_quadrature: no convergence after " +
                                std::to_string(count) + " panels",
                            total, error);
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a < 1e-15 * (b - a)) {
      throw QuadratureError("adaptive_quadrature: panel width below double resolution", total, error);
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // re-sum to shed the accumulated update rounding
  double sum = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    panels.pop();
  }
  return sum;
}

}  // namespace

double adaptive_quadrature(const Integrand& f, double a, double b, double tol,
                           SqrtEndpoint endpoints) {
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be positive");
  if (a == b) return 0.0;
  if (b < a) return -adaptive_quadrature(f, b, a, tol, endpoints);

  const auto from_lower = [&](double lo, double hi, double t) {
    return adaptive_plain([&](double s) { return 2.0 * s * f(lo + s * s); }, 0.0,
                          std::sqrt(hi - lo), t);
  };
  const auto from_upper = [&](double lo, double hi, double t) {
    return adaptive_plain([&](double s) { return 2.0 * s * f(hi - s * s); }, 0.0,
                          std::sqrt(hi - lo), t);
  };

  switch (endpoints) {
    case SqrtEndpoint::None:
      return adaptive_plain(f, a, b, tol);
    case SqrtEndpoint::Lower:
      return from_lower(a, b, tol);
    case SqrtEndpoint::Upper:
      return from_upper(a, b, tol);
    case SqrtEndpoint::Both: {
      const double mid = 0.5 * (a + b);
      return from_lower(a, mid, 0.5 * tol) + from_upper(mid, b, 0.5 * tol);
    }
  }
  return 0.0;
}

}  // namespace mazer
