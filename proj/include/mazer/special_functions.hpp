#pragma once

// Self-contained numeric kernels for the semiclassical chain:
//  - Bessel J of order +-1/3 (value and derivative),
//  - Gamma function and the constants Gamma(1/3), Gamma(2/3), Gamma(4/3),
//  - adaptive Gauss-Kronrod quadrature with optional square-root endpoint
//    substitution for integrands that vanish like sqrt at a turning point.

#include <functional>
#include <stdexcept>
#include <string>

namespace mazer {

enum class ThirdOrder { Positive, Negative };  // nu = +1/3 or -1/3

struct BesselJ {
  double value;
  double derivative;
};

// J_nu(x) and J_nu'(x) for nu = +-1/3 and x > 0.
// Power series below kBesselCrossover, Hankel asymptotic expansion above it.
BesselJ bessel_j_third(ThirdOrder order, double x);

// The two branches, exposed so the crossover can be checked directly.
BesselJ bessel_j_series(double nu, double x);
BesselJ bessel_j_asymptotic(double nu, double x);

// Chosen from an accuracy sweep: both branches agree with a long-double
// reference to about 1e-13 absolute at x = 12.5; the series loses digits to
// cancellation above it and the Hankel expansion is truncated too early below.
inline constexpr double kBesselCrossover = 12.5;

// Lanczos approximation (g = 7, 9 terms), reflection below 1/2.
double lanczos_gamma(double x);

struct GammaConstants {
  double gamma_one_third;
  double gamma_two_thirds;
  double gamma_four_thirds;
  // (2/9)^(1/3) Gamma(2/3) / Gamma(4/3): the small-argument ratio that
  // appears in the large-xi limit of the edge log-derivative.
  double alpha;
};

// 30-digit reference values, reproduced in the tests by lanczos_gamma and
// std::tgamma.
inline constexpr GammaConstants kGammaConstants{
    2.678938534707747633655692940974,
    1.354117939426400416945288028154,
    0.892979511569249211218564313658,
    0.918496472007921179761086438685,
};

inline const GammaConstants& gamma_constants() { return kGammaConstants; }

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  [[nodiscard]] double estimate() const { return estimate_; }
  [[nodiscard]] double error_estimate() const { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

using Integrand = std::function<double(double)>;

enum class SqrtEndpoint { None, Lower, Upper, Both };

// Adaptive G7-K15 integration to absolute error tol. With a SqrtEndpoint
// flag the marked ends are mapped through x = end +- t^2, which turns a
// sqrt(|x - end|) behaviour into a smooth integrand.
// Throws QuadratureError if the subdivision budget is exhausted.
double adaptive_quadrature(const Integrand& f, double a, double b, double tol,
                           SqrtEndpoint endpoints = SqrtEndpoint::None);

}  // namespace mazer
