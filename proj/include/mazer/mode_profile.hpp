#pragma once

// Longitudinal cavity mode shapes u(z).
//
// Positions are measured in units of the cavity length L, so the field is
// supported on |z/L| <= 1/2 and both profiles enclose unit area
// (the dimensional statement is  integral u dz = L).
//
//   mesa        u = 1                     for |z/L| <= 1/2
//   sinusoidal  u = (pi/2) cos(pi z / L)  for |z/L| <  1/2
//
// The mesa edge is kept sharp. At exactly |z/L| = 1/2 the mesa returns its
// inside value 1; the sinusoid vanishes there anyway.

#include <optional>
#include <string>
#include <string_view>

namespace mazer {

inline constexpr double kHalfWidth = 0.5;

enum class ProfileKind { Mesa, Sinusoidal };

class ModeProfile {
 public:
  constexpr explicit ModeProfile(ProfileKind kind) : kind_(kind) {}

  static constexpr ModeProfile mesa() { return ModeProfile(ProfileKind::Mesa); }
  static constexpr ModeProfile sinusoidal() { return ModeProfile(ProfileKind::Sinusoidal); }

  // Accepts "mesa" | "sinusoidal" (also "constant", "cosine"); throws std::invalid_argument.
  static ModeProfile from_name(std::string_view name);

  [[nodiscard]] constexpr ProfileKind kind() const { return kind_; }
  [[nodiscard]] std::string_view name() const;

  // u at position z/L.
  [[nodiscard]] double operator()(double z_over_l) const;

  // max over z of u: 1 for mesa, pi/2 for the sinusoid.
  [[nodiscard]] double peak() const;

  // Classical turning point a/L of the barrier channel, where k^2 = kappa_n^2 u(a).
  // Empty when the atom passes over the barrier (k^2 > kappa_n^2 * peak).
  [[nodiscard]] std::optional<double> turning_point(double k_over_kappa_n) const;

  friend constexpr bool operator==(ModeProfile, ModeProfile) = default;

 private:
  ProfileKind kind_;
};

inline double evaluate_profile(const ModeProfile& profile, double z_over_l) {
  return profile(z_over_l);
}

// Numerical integral of u over the cavity (in units of L). Should be 1.
double profile_area(const ModeProfile& profile, double tol = 1e-12);

}  // namespace mazer
