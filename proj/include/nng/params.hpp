#pragma once

#include <numbers>
#include <stdexcept>

namespace nng {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double G_newton = 6.67408e-11;       // m^3 kg^-1 s^-2
inline constexpr double default_mass = 1.2e-24;         // kg
inline constexpr double default_omega = 4.0e3 * std::numbers::pi;  // rad/s
inline constexpr double default_scattering_length = 5.5e-8;        // m
inline constexpr double default_G = 6.67408e-6;         // 1e5 x G_newton
}  // namespace constants

/// Trap, particle and interaction constants (SI units).
struct PhysicalParams {
  double mu = constants::default_mass;
  double omega = constants::default_omega;
  double l_s = constants::default_scattering_length;
  double G = constants::default_G;
  double hbar = constants::hbar;
  double lambda = 1.0;  // accumulated scale factor, bookkeeping only

  /// Throws std::invalid_argument unless every field is strictly positive.
  /// G and l_s may be zero (free or non-interacting runs).
  void validate() const;

  double hbar_omega() const { return hbar * omega; }
  /// sqrt(mu omega / hbar): inverse oscillator length.
  double inverse_length() const;
  /// Delta-interaction strength 4 pi hbar^2 l_s / mu.
  double contact_strength() const;
  /// Closed-form estimate U ~ 4 hbar^2 l_s / (mu sqrt(pi)) (mu omega/hbar)^{3/2}.
  double contact_estimate_u() const;
  /// eta = U / (3/2 hbar omega) using contact_estimate_u().
  double eta() const;
  /// hbar^{3/2} G^{-1} mu^{-5/2} omega^{-1/2}.
  double onset_time_estimate() const;
};

/// G -> lambda G, mu -> lambda^{-2/5} mu, l_s -> lambda^{1/5} l_s; omega and
/// hbar unchanged. The oscillator length follows as lambda^{1/5}.
PhysicalParams scale_params(const PhysicalParams& p, double lambda);

}  // namespace nng
