#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "abfield/analytic.hpp"
#include "abfield/errors.hpp"

using namespace abfield;

namespace {

constexpr double kPi = std::numbers::pi;

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

ElectricSetup random_electric(std::mt19937_64& rng) {
  ElectricSetup s;
  s.Q = log_uniform(rng, 1e-12, 1e-6) * (rng() % 2 ? 1.0 : -1.0);
  s.M = log_uniform(rng, 1e-27, 1e-18);
  s.v = log_uniform(rng, 1e-2, 1e6);
  s.r = log_uniform(rng, 1e-6, 1e2);
  s.T = log_uniform(rng, 1e-12, 1e-3);
  s.tau = s.T * log_uniform(rng, 1.01, 100.0);
  return s;
}

MagneticSetup random_magnetic(std::mt19937_64& rng) {
  MagneticSetup s;
  s.Q = log_uniform(rng, 1e-3, 1e10) * (rng() % 2 ? 1.0 : -1.0);
  s.M = log_uniform(rng, 1e-24, 1e-12);
  s.v = log_uniform(rng, 1e-6, 1e3);
  s.r = log_uniform(rng, 1e-4, 1.0);
  s.R = s.r * log_uniform(rng, 2.0, 1e3);
  s.L = s.R * log_uniform(rng, 2.0, 1e4);
  s.u = log_uniform(rng, 1e-2, 1e8);
  return s;
}

// Integral of (R^2 + z^2)^(-3/2) from 0 to z.
double antiderivative(double z, double R) { return z / (R * R * std::sqrt(R * R + z * z)); }

}  // namespace

TEST(Analytic, DeBroglieWavelength) {
  const auto k = Constants::gaussian_cgs();
  EXPECT_NEAR(de_broglie_wavelength(2.0, 3.0, k), k.h_planck / 6.0, 1e-40);
  EXPECT_THROW(de_broglie_wavelength(0.0, 1.0, k), DomainError);
  EXPECT_THROW(de_broglie_wavelength(1.0, 0.0, k), DomainError);
}

TEST(Analytic, ElectricPhaseNaturalUnits) {
  const auto k = Constants::natural();
  const ElectricSetup s{.Q = 3.0, .M = 1, .v = 1, .r = 2.0, .T = 5.0, .tau = 6.0};
  EXPECT_DOUBLE_EQ(electric_ab_phase(s, k), -15.0);
  const auto shift = electric_source_shift(s, k);
  EXPECT_DOUBLE_EQ(shift.delta_v, -1.5);
  EXPECT_DOUBLE_EQ(shift.delta_x, -7.5);
}

TEST(Analytic, ElectricPhaseIsOddInQ) {
  const auto k = Constants::gaussian_cgs();
  ElectricSetup s{.Q = 4.8e-10, .M = 1e-24, .v = 1000, .r = 1000, .T = 4.2e-7, .tau = 1e-6};
  const double phi = electric_ab_phase(s, k);
  s.Q = -s.Q;
  EXPECT_DOUBLE_EQ(electric_ab_phase(s, k), -phi);
  s.Q = 0.0;
  EXPECT_EQ(electric_ab_phase(s, k), 0.0);
}

TEST(Analytic, ElectricIdentityOverRandomSetups) {
  std::mt19937_64 rng(20240611);
  const auto k = Constants::gaussian_cgs();
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_electric(rng);
    const double phi = -2.0 * k.e_charge * s.Q * s.T / (s.r * k.hbar);
    const auto report = consistency_report(s, k);
    EXPECT_NEAR(report.phi_ab, phi, 1e-13 * std::abs(phi));
    EXPECT_LE(std::abs(report.phi_from_shift - report.phi_ab), 1e-12 * std::abs(report.phi_ab));
    EXPECT_LE(report.relative_residual, 1e-12);
    EXPECT_FALSE(report.flux.has_value());
  }
}

TEST(Analytic, MagneticIdentityOverRandomSetups) {
  std::mt19937_64 rng(7);
  const auto k = Constants::gaussian_cgs();
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_magnetic(rng);
    const double c = k.c_light;
    const double phi = 4.0 * kPi * k.e_charge * s.Q * s.v * s.r / (c * c * s.L * k.hbar);
    const auto report = consistency_report(s, k);
    EXPECT_NEAR(report.phi_ab, phi, 1e-13 * std::abs(phi));
    ASSERT_TRUE(report.flux.has_value());
    EXPECT_NEAR(*report.flux, 4.0 * kPi * s.Q * s.v * s.r / (c * s.L), 1e-13 * std::abs(*report.flux));
    EXPECT_LE(std::abs(report.phi_from_shift - report.phi_ab), 1e-12 * std::abs(report.phi_ab));
    EXPECT_NEAR(magnetic_ab_phase_expanded(s, k), report.phi_ab, 1e-13 * std::abs(phi));
    EXPECT_NEAR(cylinder_shift(s, k), cylinder_shift_expanded(s, k), 1e-13 * std::abs(cylinder_shift(s, k)));
  }
}

TEST(Analytic, PhaseFromShiftsMultiplicity) {
  EXPECT_DOUBLE_EQ(phase_from_shifts(0.25, 1.0, 2), kPi);
  EXPECT_DOUBLE_EQ(phase_from_shifts(0.25, 1.0, 4), 2.0 * kPi);
  EXPECT_THROW(phase_from_shifts(0.25, 1.0, 3), DomainError);
  EXPECT_THROW(phase_from_shifts(0.25, 0.0, 2), DomainError);
}

TEST(Analytic, FluxProfileDecaysAsCube) {
  const auto k = Constants::natural();
  const MagneticSetup s{.Q = 1, .M = 1, .v = 1, .r = 1, .R = 10, .L = 1000, .u = 2};
  const double at0 = electron_flux_profile(0.0, s, k);
  EXPECT_NEAR(at0, kPi * 1.0 * 2.0 * 10.0 / 1000.0, 1e-15);
  EXPECT_NEAR(electron_flux_profile(10.0, s, k), at0 / std::pow(2.0, 1.5), 1e-15);
  EXPECT_DOUBLE_EQ(electron_flux_profile(-7.0, s, k), electron_flux_profile(7.0, s, k));
}

TEST(Analytic, KickQuadratureMatchesAntiderivative) {
  const auto k = Constants::gaussian_cgs();
  for (double ratio : {3.0, 10.0, 100.0, 1000.0}) {
    const MagneticSetup s{.Q = 1.5e8, .M = 1e-20, .v = 1e-3, .r = 1, .R = 20, .L = 20 * ratio, .u = 3};
    // Closed form assumes Int_{-inf}^{inf} (R^2+z^2)^{-3/2} dz = 2/R^2.
    const double closed = cylinder_velocity_kick_closed(s, k);
    const double oracle = closed * (s.R * s.R / 2.0) * 2.0 * antiderivative(s.L / 2.0, s.R);
    for (double tol : {1e-6, 1e-10}) {
      const auto q = cylinder_velocity_kick_quadrature(s, k, tol);
      EXPECT_NEAR(q.value, oracle, 10.0 * tol * std::abs(oracle)) << "L/R=" << ratio;
      const auto half = cylinder_velocity_kick_half(s, k, tol);
      EXPECT_NEAR(2.0 * half.value, q.value, 10.0 * tol * std::abs(oracle));
    }
  }
}

TEST(Analytic, FiniteLengthRatio) {
  const auto k = Constants::gaussian_cgs();
  const struct {
    double L_over_R;
    double ratio;
  } cases[] = {{100.0, 0.99980006}, {10.0, 0.98058068}};
  for (const auto& c : cases) {
    const MagneticSetup s{.Q = 1e8, .M = 1e-20, .v = 1e-3, .r = 1, .R = 20, .L = 20 * c.L_over_R, .u = 3};
    const double ratio = cylinder_velocity_kick_quadrature(s, k, 1e-10).value / cylinder_velocity_kick_closed(s, k);
    EXPECT_NEAR(ratio, 1.0 / std::sqrt(1.0 + 4.0 / (c.L_over_R * c.L_over_R)), 1e-9);
    EXPECT_NEAR(ratio, c.ratio, 1e-8);
  }
}

TEST(Analytic, QuadratureToleranceDomain) {
  const auto k = Constants::gaussian_cgs();
  const MagneticSetup s{.Q = 1, .M = 1, .v = 1, .r = 1, .R = 20, .L = 1000, .u = 3};
  EXPECT_THROW(cylinder_velocity_kick_quadrature(s, k, 0.0), DomainError);
  EXPECT_THROW(cylinder_velocity_kick_quadrature(s, k, 1e-2), DomainError);
}

TEST(Analytic, RelativeResidualFloor) {
  EXPECT_EQ(relative_residual(0.0, 0.0), 0.0);
  EXPECT_NEAR(relative_residual(1.01, 1.0), 0.01, 1e-14);
  EXPECT_TRUE(std::isfinite(relative_residual(1e-310, 0.0)));
}

TEST(Analytic, ZeroChargeReportsZeroResidual) {
  const auto k = Constants::gaussian_cgs();
  const ElectricSetup s{.Q = 0, .M = 1e-24, .v = 1000, .r = 1000, .T = 4.2e-7, .tau = 1e-6};
  const auto report = consistency_report(s, k);
  EXPECT_EQ(report.phi_ab, 0.0);
  EXPECT_EQ(report.phi_from_shift, 0.0);
  EXPECT_EQ(report.relative_residual, 0.0);
}
