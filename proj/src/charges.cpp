#include "abfield/charges.hpp"

#include <cmath>

#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

double Vec2::norm() const noexcept { return std::hypot(x, y); }

void ChargeConfiguration::validate() const {
  if (positions.size() != charges.size() || labels.size() != charges.size()) {
    throw DomainError("ChargeConfiguration: positions, charges and labels differ in length");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (positions[i] == positions[j]) {
        throw DomainError(fmt::format("ChargeConfiguration: '{}' and '{}' coincide", labels[i], labels[j]));
      }
    }
  }
}

Vec2 coulomb_field_at(Vec2 point, const ChargeConfiguration& config) {
  Vec2 field;
  bool self_seen = false;
  for (std::size_t i = 0; i < config.positions.size(); ++i) {
    const double dx = point.x - config.positions[i].x;
    const double dy = point.y - config.positions[i].y;
    if (dx == 0.0 && dy == 0.0) {
      if (self_seen) throw DomainError("coulomb_field_at: query point coincides with more than one charge");
      self_seen = true;
      continue;
    }
    const double d = std::hypot(dx, dy);
    const double f = config.charges[i] / (d * d * d);
    field.x += f * dx;
    field.y += f * dy;
  }
  return field;
}

NullCheckReport triggered_null_scenario(double r, double Q, const Constants& k) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("triggered_null_scenario: r must be positive");
  NullCheckReport report;
  report.Q = Q;
  report.r = r;
  report.configuration = ChargeConfiguration{
      .positions = {{0.0, 0.0}, {0.0, r}, {0.0, -r}},
      .charges = {-k.e_charge, Q, Q},
      .labels = {"electron", "charge_upper", "charge_lower"},
  };
  report.configuration.validate();

  const double unit = k.e_charge / (r * r);
  for (std::size_t i = 0; i < 3; ++i) {
    ParticleResidual p;
    p.label = report.configuration.labels[i];
    p.position = report.configuration.positions[i];
    p.field = coulomb_field_at(p.position, report.configuration);
    p.magnitude = p.field.norm();
    p.normalized = p.magnitude / unit;
    report.max_normalized_residual = std::max(report.max_normalized_residual, p.normalized);
    report.residuals.push_back(p);
  }
  if (report.max_normalized_residual <= 1e-12) report.predicted_phase = 0.0;
  return report;
}

}  // namespace abfield
