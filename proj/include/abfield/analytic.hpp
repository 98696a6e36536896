#pragma once

#include <optional>

#include "abfield/units.hpp"

namespace abfield {

/// lambda = h / (M v).
double de_broglie_wavelength(double mass, double speed, const Constants& k);

/// Electric AB phase, -2 e Q T / (r hbar). Sign convention: phi = arg<Psi_L|Psi_R>
/// under exp(-iHt/hbar), so a potential-energy difference V_L - V_R held for
/// time T contributes (V_L - V_R) T / hbar.
double electric_ab_phase(const ElectricSetup& s, const Constants& k);

struct SourceShift {
  double delta_v = 0.0;
  double delta_x = 0.0;
};

/// Velocity change and shift of one source charge, from -eQ/r = M v dv.
SourceShift electric_source_shift(const ElectricSetup& s, const Constants& k);

/// multiplicity * (delta_x / lambda) * 2 pi. Multiplicity is 2 for the
/// electric geometry (two charges shifted alike) and 4 for the magnetic one
/// (two cylinders, shifted oppositely in each branch); anything else throws.
double phase_from_shifts(double delta_x, double lambda, int multiplicity);

/// Flux of the two counter-rotating cylinders, 4 pi Q v r / (c L).
double solenoid_flux(const MagneticSetup& s, const Constants& k);

/// e Phi / (c hbar).
double magnetic_ab_phase(const MagneticSetup& s, const Constants& k);

/// 4 pi e Q v r / (c^2 L hbar), written out; agrees with magnetic_ab_phase.
double magnetic_ab_phase_expanded(const MagneticSetup& s, const Constants& k);

/// Flux through the solenoid cross-section at axial distance z produced by
/// the orbiting electron: pi r^2 e u R / (c (R^2 + z^2)^{3/2}).
double electron_flux_profile(double z, const MagneticSetup& s, const Constants& k);

/// Long-cylinder limit of the surface velocity kick, u Q e r / (c^2 M R L).
double cylinder_velocity_kick_closed(const MagneticSetup& s, const Constants& k);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Finite-length surface velocity kick: the slice impulses
/// Phi(z) dQ / (c 2 pi r) summed over z in [-L/2, L/2] and divided by M.
/// Adaptive Gauss-Kronrod to relative tolerance tol in (0, 1e-3].
/// Throws NumericalError (with the achieved estimate) if it cannot converge.
QuadratureResult cylinder_velocity_kick_quadrature(const MagneticSetup& s, const Constants& k, double tol);

/// Same integrand over [0, L/2]; twice this equals the full kick.
QuadratureResult cylinder_velocity_kick_half(const MagneticSetup& s, const Constants& k, double tol);

/// Cylinder shift during the half-orbit transit, dv * pi R / u.
double cylinder_shift(const MagneticSetup& s, const Constants& k);

/// Closed form pi Q e r / (c^2 M L).
double cylinder_shift_expanded(const MagneticSetup& s, const Constants& k);

struct ConsistencyReport {
  double phi_ab = 0.0;
  double delta_x = 0.0;
  double delta_v = 0.0;
  double lambda = 0.0;
  double phi_from_shift = 0.0;
  std::optional<double> flux;
  double relative_residual = 0.0;
};

inline constexpr double kResidualFloor = 1e-300;

double relative_residual(double estimate, double reference) noexcept;

ConsistencyReport consistency_report(const ElectricSetup& s, const Constants& k);
ConsistencyReport consistency_report(const MagneticSetup& s, const Constants& k);

}  // namespace abfield
