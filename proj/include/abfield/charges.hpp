#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abfield/units.hpp"

namespace abfield {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const noexcept;
  bool operator==(const Vec2&) const = default;
};

/// Point charges in a plane (cm, statC).
struct ChargeConfiguration {
  std::vector<Vec2> positions;
  std::vector<double> charges;
  std::vector<std::string> labels;

  /// Throws DomainError on size mismatch or coincident positions.
  void validate() const;
};

/// Coulomb field sum q (p - p_i)/|p - p_i|^3. A charge sitting exactly at
/// `point` is skipped (self-field); two or more there throw DomainError.
Vec2 coulomb_field_at(Vec2 point, const ChargeConfiguration& config);

inline constexpr const char* kNullCheckStatus = "predicted under local-field corollary";

struct ParticleResidual {
  std::string label;
  Vec2 position;
  Vec2 field;                // statV/cm
  double magnitude = 0.0;    // statV/cm
  double normalized = 0.0;   // in units of e / r^2
};

struct NullCheckReport {
  double Q = 0.0;
  double r = 0.0;
  ChargeConfiguration configuration;
  std::vector<ParticleResidual> residuals;
  double max_normalized_residual = 0.0;
  /// 0 when every particle sits in zero net field (to 1e-12 of e/r^2);
  /// otherwise no prediction is made.
  std::optional<double> predicted_phase;
  std::string status = kNullCheckStatus;
};

/// Electron (-e) at mirror A (the origin) and two charges Q at (0, +-r).
NullCheckReport triggered_null_scenario(double r, double Q, const Constants& k);

}  // namespace abfield
