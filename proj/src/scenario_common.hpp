#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>

#include "abfield/scenarios.hpp"

namespace abfield::detail {

inline double relative_error(double value, double reference) noexcept {
  return std::abs(value - reference) / std::max(std::abs(reference), kErrorFloor);
}

/// Smallest power of two (at least 256) giving spacing <= dx_target.
inline std::size_t auto_points(double length, double dx_target) {
  const auto needed = static_cast<std::size_t>(std::ceil(length / dx_target));
  return std::bit_ceil(std::max<std::size_t>(needed, 256));
}

/// Run-wide extrema that every scenario reports.
inline void summarize_series(const BranchResult& b, double hbar, ScenarioReport& report) {
  report.min_visibility = *std::min_element(b.visibility.begin(), b.visibility.end());
  report.max_entropy = *std::max_element(b.entropy.begin(), b.entropy.end());
  double ratio = INFINITY;
  for (std::size_t i = 0; i < b.moments_L.size(); ++i) {
    for (const Moments* m : {&b.moments_L[i], &b.moments_R[i]}) {
      ratio = std::min(ratio, m->std_x * m->std_p / (0.5 * hbar));
    }
  }
  report.min_uncertainty_ratio = ratio;
  report.norm_drift = b.norm_drift;
  report.boundary_probability = b.boundary_probability;
  report.phase_anchored = b.anchored;
  report.final_visibility = std::abs(b.final_overlap);
  report.final_entropy = entanglement_entropy(b.final_overlap);
}

}  // namespace abfield::detail
