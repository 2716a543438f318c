#include "mazer/mode_profile.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mazer/special_functions.hpp"

namespace mazer {

ModeProfile ModeProfile::from_name(std::string_view name) {
  if (name == "mesa" || name == "constant") return mesa();
  if (name == "sinusoidal" || name == "cosine") return sinusoidal();
  throw std::invalid_argument("unknown mode profile '" + std::string(name) +
                              "' (expected mesa or sinusoidal)");
}

std::string_view ModeProfile::name() const {
  return kind_ == ProfileKind::Mesa ? "mesa" : "sinusoidal";
}

double ModeProfile::operator()(double z) const {
  const double az = std::fabs(z);
  switch (kind_) {
    case ProfileKind::Mesa:
      return az <= kHalfWidth ? 1.0 : 0.0;
    case ProfileKind::Sinusoidal:
      if (az >= kHalfWidth) return 0.0;
      return 0.5 * std::numbers::pi * std::cos(std::numbers::pi * z);
  }
  return 0.0;
}

double ModeProfile::peak() const {
  return kind_ == ProfileKind::Mesa ? 1.0 : 0.5 * std::numbers::pi;
}

std::optional<double> ModeProfile::turning_point(double ratio) const {
  if (ratio < 0.0) throw std::invalid_argument("turning_point: k/kappa_n must be >= 0");
  const double height = ratio * ratio;
  if (height > peak()) return std::nullopt;
  if (kind_ == ProfileKind::Mesa) return kHalfWidth;  // the edge itself
  const double c = 2.0 * height / std::numbers::pi;
  return std::acos(std::min(c, 1.0)) / std::numbers::pi;
}

double profile_area(const ModeProfile& profile, double tol) {
  const auto f = [&](double z) { return profile(z); };
  // Integrate each half separately so the mesa jump sits on an interval end.
  return adaptive_quadrature(f, -kHalfWidth, 0.0, 0.5 * tol) +
         adaptive_quadrature(f, 0.0, kHalfWidth, 0.5 * tol);
}

}  // namespace mazer
