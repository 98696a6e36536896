#include "abfield/units.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(field, fmt::format("must be finite and > 0 (got {})", value));
  }
}

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ConfigError(field, "must be finite");
}

}  // namespace

Constants Constants::gaussian_cgs() {
  constexpr double hbar = 1.054571817e-27;
  return Constants{
      .e_charge = 4.80320471e-10,
      .hbar = hbar,
      .h_planck = 2.0 * std::numbers::pi * hbar,
      .c_light = 2.99792458e10,
      .electron_mass = 9.1093837015e-28,
  };
}

Constants Constants::natural() {
  return Constants{
      .e_charge = 1.0,
      .hbar = 1.0,
      .h_planck = 2.0 * std::numbers::pi,
      .c_light = 1.0,
      .electron_mass = 1.0,
  };
}

void Constants::validate() const {
  require_positive(e_charge, "constants.e_charge");
  require_positive(hbar, "constants.hbar");
  require_positive(h_planck, "constants.h_planck");
  require_positive(c_light, "constants.c_light");
  require_positive(electron_mass, "constants.electron_mass");
  if (std::abs(h_planck - 2.0 * std::numbers::pi * hbar) > 1e-15 * h_planck) {
    throw ConfigError("constants.h_planck", "must equal 2*pi*hbar");
  }
}

void ElectricSetup::validate() const {
  require_finite(Q, "setup.Q");
  require_positive(M, "setup.M");
  require_positive(v, "setup.v");
  require_positive(r, "setup.r");
  require_positive(T, "setup.T");
  require_positive(tau, "setup.tau");
  if (!(T < tau)) {
    throw ConfigError("setup.T", fmt::format("invariant T < tau violated (T={}, tau={})", T, tau));
  }
}

std::vector<std::string> MagneticSetup::validate() const {
  require_finite(Q, "setup.Q");
  require_positive(M, "setup.M");
  require_finite(v, "setup.v");
  if (v < 0.0) throw ConfigError("setup.v", "surface speed must be >= 0");
  require_positive(r, "setup.r");
  require_positive(R, "setup.R");
  require_positive(L, "setup.L");
  require_positive(u, "setup.u");
  if (!(r < R && R < L)) {
    throw ConfigError("setup.R", fmt::format("invariant r < R < L violated (r={}, R={}, L={})", r, R, L));
  }
  std::vector<std::string> warnings;
  if (R / r < 10.0) {
    warnings.push_back(fmt::format("aspect ratio R/r = {} < 10; the thin-solenoid limit r << R is poor", R / r));
  }
  if (L / R < 10.0) {
    warnings.push_back(fmt::format("aspect ratio L/R = {} < 10; the long-solenoid limit R << L is poor", L / R));
  }
  return warnings;
}

void NullCheckSetup::validate() const {
  require_finite(Q, "setup.Q");
  require_positive(r, "setup.r");
}

ScalingMap::ScalingMap(double length_unit, double time_unit, double mass_unit)
    : length_(length_unit), time_(time_unit), mass_(mass_unit) {
  require_positive(length_, "scaling.length_unit");
  require_positive(time_, "scaling.time_unit");
  require_positive(mass_, "scaling.mass_unit");
}

ScalingMap ScalingMap::natural_for(double mass, double speed, double hbar) {
  require_positive(mass, "scaling.mass");
  require_positive(speed, "scaling.speed");
  require_positive(hbar, "scaling.hbar");
  const double length = hbar / (mass * speed);
  return ScalingMap(length, length / speed, mass);
}

double ScalingMap::charge_unit() const {
  return std::sqrt(mass_ * length_ * length_ * length_) / time_;
}

ScalingMap ScalingMap::inverse() const {
  return ScalingMap(1.0 / length_, 1.0 / time_, 1.0 / mass_);
}

ElectricSetup to_natural_units(const ElectricSetup& s, const ScalingMap& map) {
  return ElectricSetup{
      .Q = s.Q / map.charge_unit(),
      .M = s.M / map.mass_unit(),
      .v = s.v / map.speed_unit(),
      .r = s.r / map.length_unit(),
      .T = s.T / map.time_unit(),
      .tau = s.tau / map.time_unit(),
  };
}

MagneticSetup to_natural_units(const MagneticSetup& s, const ScalingMap& map) {
  return MagneticSetup{
      .Q = s.Q / map.charge_unit(),
      .M = s.M / map.mass_unit(),
      .v = s.v / map.speed_unit(),
      .r = s.r / map.length_unit(),
      .R = s.R / map.length_unit(),
      .L = s.L / map.length_unit(),
      .u = s.u / map.speed_unit(),
  };
}

Constants to_natural_units(const Constants& k, const ScalingMap& map) {
  return Constants{
      .e_charge = k.e_charge / map.charge_unit(),
      .hbar = k.hbar / map.action_unit(),
      .h_planck = k.h_planck / map.action_unit(),
      .c_light = k.c_light / map.speed_unit(),
      .electron_mass = k.electron_mass / map.mass_unit(),
  };
}

ElectricSetup to_physical_units(const ElectricSetup& s, const ScalingMap& map) {
  return to_natural_units(s, map.inverse());
}

MagneticSetup to_physical_units(const MagneticSetup& s, const ScalingMap& map) {
  return to_natural_units(s, map.inverse());
}

Constants to_physical_units(const Constants& k, const ScalingMap& map) {
  return to_natural_units(k, map.inverse());
}

}  // namespace abfield
