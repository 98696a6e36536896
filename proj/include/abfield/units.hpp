#pragma once

#include <string>
#include <vector>

namespace abfield {

/// Physical constants in Gaussian CGS units (or any rescaling of them).
struct Constants {
  double e_charge = 0.0;       // statC, magnitude
  double hbar = 0.0;           // erg s
  double h_planck = 0.0;       // erg s
  double c_light = 0.0;        // cm/s
  double electron_mass = 0.0;  // g

  /// CODATA 2018 values in Gaussian units.
  static Constants gaussian_cgs();
  /// e = hbar = c = electron_mass = 1, h = 2*pi.
  static Constants natural();

  void validate() const;
  bool operator==(const Constants&) const = default;
};

/// Fig. 2 electric experiment: two source charges that dwell near their own
/// mirrors while the electron sits near mirror A.
struct ElectricSetup {
  double Q = 0.0;    // statC, signed
  double M = 0.0;    // g
  double v = 0.0;    // cm/s, source speed near its mirror
  double r = 0.0;    // cm, source to mirror A at closest approach
  double T = 0.0;    // s, source dwell time
  double tau = 0.0;  // s, electron dwell time near mirror A

  void validate() const;
  bool operator==(const ElectricSetup&) const = default;
};

/// Fig. 4 magnetic experiment: counter-rotating charged cylinders inside the
/// electron's circular orbit.
struct MagneticSetup {
  double Q = 0.0;  // statC, signed (odd symmetry checks)
  double M = 0.0;  // g
  double v = 0.0;  // cm/s, cylinder surface speed, >= 0
  double r = 0.0;  // cm, cylinder radius
  double R = 0.0;  // cm, electron orbit radius
  double L = 0.0;  // cm, cylinder length
  double u = 0.0;  // cm/s, electron orbital speed

  /// Throws ConfigError on hard violations; returns soft warnings
  /// (aspect ratios below 10).
  std::vector<std::string> validate() const;
  bool operator==(const MagneticSetup&) const = default;
};

/// Triggered-charges null scenario: only the charge and the distance matter.
struct NullCheckSetup {
  double Q = 0.0;
  double r = 0.0;

  void validate() const;
  bool operator==(const NullCheckSetup&) const = default;
};

/// Physical size of one simulation unit of length, time and mass.
/// Charge scales as sqrt(mass * length^3) / time in Gaussian units.
class ScalingMap {
 public:
  ScalingMap(double length_unit, double time_unit, double mass_unit);

  /// Units in which hbar = mass = speed = 1.
  static ScalingMap natural_for(double mass, double speed, double hbar);

  double length_unit() const noexcept { return length_; }
  double time_unit() const noexcept { return time_; }
  double mass_unit() const noexcept { return mass_; }
  double energy_unit() const noexcept { return mass_ * length_ * length_ / (time_ * time_); }
  double charge_unit() const;
  double speed_unit() const noexcept { return length_ / time_; }
  double action_unit() const noexcept { return energy_unit() * time_; }

  ScalingMap inverse() const;

  bool operator==(const ScalingMap&) const = default;

 private:
  double length_;
  double time_;
  double mass_;
};

ElectricSetup to_natural_units(const ElectricSetup& s, const ScalingMap& map);
MagneticSetup to_natural_units(const MagneticSetup& s, const ScalingMap& map);
Constants to_natural_units(const Constants& k, const ScalingMap& map);

ElectricSetup to_physical_units(const ElectricSetup& s, const ScalingMap& map);
MagneticSetup to_physical_units(const MagneticSetup& s, const ScalingMap& map);
Constants to_physical_units(const Constants& k, const ScalingMap& map);

}  // namespace abfield
