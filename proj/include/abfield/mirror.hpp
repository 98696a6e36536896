#pragma once

#include <functional>

namespace abfield {

/// Shape of a slow-dwell mirror: a steep inner wall at x = 0, a flat plateau
/// of height V, and a smooth fall to zero around x = d.
///
///   U(x) = cap                                 x <= 0
///          V (1 + (a/x)^2 (1 - s((x-2.5a)/2.5a)))  0 < x < d - w   (a = wall_scale)
///          V (1 - s((x - d + w) / 2w))          d - w <= x < d + w
///          0                                   x >= d + w
///
/// with s the quintic smoothstep. The wall term vanishes identically beyond
/// x = 5a, so U == V exactly on [5a, d - w].
struct MirrorSpec {
  double V = 0.0;
  double d = 0.0;
  double w = 0.0;
  double wall_scale = 0.0;

  void validate() const;
  bool operator==(const MirrorSpec&) const = default;

  double plateau_begin() const noexcept { return 5.0 * wall_scale; }
  double plateau_end() const noexcept { return d - w; }
  double outer_edge() const noexcept { return d + w; }
  double cap() const noexcept { return 1e6 * V; }
};

/// 6t^5 - 15t^4 + 10t^3 clamped to [0, 1].
double smoothstep(double t) noexcept;

double mirror_potential(double x, const MirrorSpec& m) noexcept;

/// 1 near the mirror, 0 far from it; shares the outer smoothstep of the
/// potential so "near" means x < d with a C2 transition over [d-w, d+w].
double near_mirror_weight(double x, const MirrorSpec& m) noexcept;

/// Innermost classical turning point for a particle of energy E > V.
double turning_point(const MirrorSpec& m, double E);

/// Round trip time spent in (turning point, d + w) by a classical particle of
/// energy E and given mass. Throws DomainError for E <= V.
double classical_dwell_time(const MirrorSpec& m, double E, double mass);

/// Round trip time from x_far back to x_far (x_far >= d + w).
double classical_round_trip_time(const MirrorSpec& m, double E, double mass, double x_far);

/// Same round trip, with each dx/v(x) weighted by weight(x).
double weighted_round_trip_time(const MirrorSpec& m, double E, double mass, double x_far,
                                const std::function<double(double)>& weight);

}  // namespace abfield
