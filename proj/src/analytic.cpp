#include "abfield/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

namespace {

constexpr double pi = std::numbers::pi;

// Slice integrand of the kick: (1/M) Phi(z)/c * (1/(2 pi r)) * (Q/L).
auto kick_integrand(const MagneticSetup& s, const Constants& k) {
  const double c = k.c_light;
  const double prefactor = pi * s.r * s.r * k.e_charge * s.u * s.R / (c * c) / (2.0 * pi * s.r) * (s.Q / s.L) / s.M;
  const double R2 = s.R * s.R;
  return [=](double z) {
    const double q = R2 + z * z;
    return prefactor / (q * std::sqrt(q));
  };
}

QuadratureResult integrate_kick(const MagneticSetup& s, const Constants& k, double a, double b, double tol) {
  if (!(tol > 0.0 && tol <= 1e-3)) throw DomainError("cylinder kick quadrature: tol must be in (0, 1e-3]");
  s.validate();
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double error = 0.0;
  double l1 = 0.0;
  const double value = GK::integrate(kick_integrand(s, k), a, b, 30, tol, &error, &l1);
  if (value != 0.0 && error > tol * std::abs(value)) {
    throw NumericalError(fmt::format("cylinder kick quadrature did not converge: estimate {} with error {} (tol {})",
                                     value, error, tol));
  }
  return {value, error};
}

}  // namespace

double de_broglie_wavelength(double mass, double speed, const Constants& k) {
  if (!(mass > 0.0) || !(speed > 0.0)) {
    throw DomainError(fmt::format("de_broglie_wavelength: need M > 0 and v > 0 (M={}, v={})", mass, speed));
  }
  return k.h_planck / (mass * speed);
}

double electric_ab_phase(const ElectricSetup& s, const Constants& k) {
  s.validate();
  return -2.0 * k.e_charge * s.Q * s.T / (s.r * k.hbar);
}

SourceShift electric_source_shift(const ElectricSetup& s, const Constants& k) {
  s.validate();
  const double delta_v = -k.e_charge * s.Q / (s.M * s.v * s.r);
  return {delta_v, delta_v * s.T};
}

double phase_from_shifts(double delta_x, double lambda, int multiplicity) {
  if (!(lambda > 0.0)) throw DomainError("phase_from_shifts: lambda must be > 0");
  if (multiplicity != 2 && multiplicity != 4) {
    throw DomainError(fmt::format(
        "phase_from_shifts: multiplicity must be 2 (electric) or 4 (magnetic), got {}", multiplicity));
  }
  return multiplicity * (delta_x / lambda) * 2.0 * pi;
}

double solenoid_flux(const MagneticSetup& s, const Constants& k) {
  s.validate();
  return 4.0 * pi * s.Q * s.v * s.r / (k.c_light * s.L);
}

double magnetic_ab_phase(const MagneticSetup& s, const Constants& k) {
  return k.e_charge * solenoid_flux(s, k) / (k.c_light * k.hbar);
}

double magnetic_ab_phase_expanded(const MagneticSetup& s, const Constants& k) {
  s.validate();
  const double c = k.c_light;
  return 4.0 * pi * k.e_charge * s.Q * s.v * s.r / (c * c * s.L * k.hbar);
}

double electron_flux_profile(double z, const MagneticSetup& s, const Constants& k) {
  s.validate();
  const double q = s.R * s.R + z * z;
  return pi * s.r * s.r * k.e_charge * s.u * s.R / (k.c_light * q * std::sqrt(q));
}

double cylinder_velocity_kick_closed(const MagneticSetup& s, const Constants& k) {
  s.validate();
  const double c = k.c_light;
  return s.u * s.Q * k.e_charge * s.r / (c * c * s.M * s.R * s.L);
}

QuadratureResult cylinder_velocity_kick_quadrature(const MagneticSetup& s, const Constants& k, double tol) {
  return integrate_kick(s, k, -0.5 * s.L, 0.5 * s.L, tol);
}

QuadratureResult cylinder_velocity_kick_half(const MagneticSetup& s, const Constants& k, double tol) {
  return integrate_kick(s, k, 0.0, 0.5 * s.L, tol);
}

double cylinder_shift(const MagneticSetup& s, const Constants& k) {
  return cylinder_velocity_kick_closed(s, k) * pi * s.R / s.u;
}

double cylinder_shift_expanded(const MagneticSetup& s, const Constants& k) {
  s.validate();
  const double c = k.c_light;
  return pi * s.Q * k.e_charge * s.r / (c * c * s.M * s.L);
}

double relative_residual(double estimate, double reference) noexcept {
  return std::abs(estimate - reference) / std::max(std::abs(reference), kResidualFloor);
}

ConsistencyReport consistency_report(const ElectricSetup& s, const Constants& k) {
  ConsistencyReport report;
  report.phi_ab = electric_ab_phase(s, k);
  const auto shift = electric_source_shift(s, k);
  report.delta_v = shift.delta_v;
  report.delta_x = shift.delta_x;
  report.lambda = de_broglie_wavelength(s.M, s.v, k);
  report.phi_from_shift = phase_from_shifts(shift.delta_x, report.lambda, 2);
  report.relative_residual = relative_residual(report.phi_from_shift, report.phi_ab);
  return report;
}

ConsistencyReport consistency_report(const MagneticSetup& s, const Constants& k) {
  ConsistencyReport report;
  report.phi_ab = magnetic_ab_phase(s, k);
  report.delta_v = cylinder_velocity_kick_closed(s, k);
  report.delta_x = cylinder_shift(s, k);
  report.flux = solenoid_flux(s, k);
  report.lambda = de_broglie_wavelength(s.M, s.v, k);
  report.phi_from_shift = phase_from_shifts(report.delta_x, report.lambda, 4);
  report.relative_residual = relative_residual(report.phi_from_shift, report.phi_ab);
  return report;
}

}  // namespace abfield
