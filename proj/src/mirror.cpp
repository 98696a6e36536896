#include "abfield/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

void MirrorSpec::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(V)) throw ConfigError("mirror.V", "must be > 0");
  if (!positive(d)) throw ConfigError("mirror.d", "must be > 0");
  if (!positive(w) || w > d / 4.0) {
    throw ConfigError("mirror.w", fmt::format("invariant 0 < w <= d/4 violated (w={}, d={})", w, d));
  }
  if (!positive(wall_scale) || wall_scale > d / 10.0) {
    throw ConfigError("mirror.wall_scale",
                      fmt::format("invariant 0 < wall_scale <= d/10 violated (wall_scale={}, d={})", wall_scale, d));
  }
}

double smoothstep(double t) noexcept {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double mirror_potential(double x, const MirrorSpec& m) noexcept {
  if (x <= 0.0) return m.cap();
  if (x >= m.outer_edge()) return 0.0;
  if (x >= m.plateau_end()) return m.V * (1.0 - smoothstep((x - m.plateau_end()) / (2.0 * m.w)));
  const double a = m.wall_scale;
  if (x >= 5.0 * a) return m.V;
  const double ratio = a / x;
  const double wall = m.V * (1.0 + ratio * ratio * (1.0 - smoothstep((x - 2.5 * a) / (2.5 * a))));
  return std::min(wall, m.cap());
}

double near_mirror_weight(double x, const MirrorSpec& m) noexcept {
  if (x <= m.plateau_end()) return 1.0;
  return 1.0 - smoothstep((x - m.plateau_end()) / (2.0 * m.w));
}

double turning_point(const MirrorSpec& m, double E) {
  if (!(E > m.V)) throw DomainError("turning_point: requires E > V");
  const double a = m.wall_scale;
  // Pure 1/x^2 wall below 2.5a; otherwise bracket inside the blend.
  const double pure = a / std::sqrt(E / m.V - 1.0);
  if (pure <= 2.5 * a) return pure;
  auto f = [&](double x) { return mirror_potential(x, m) - E; };
  std::uintmax_t iterations = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(f, 2.5 * a, 5.0 * a,
                                                   boost::math::tools::eps_tolerance<double>(50), iterations);
  return 0.5 * (lo + hi);
}

namespace {

// 2 * Int weight(x) dx / v(x) from the turning point to x_hi.
double round_trip_integral(const MirrorSpec& m, double E, double mass, double x_hi,
                           const std::function<double(double)>* weight) {
  const double x_t = turning_point(m, E);
  auto inv_speed = [&](double x) {
    const double kinetic = E - mirror_potential(x, m);
    const double w = weight ? (*weight)(x) : 1.0;
    return kinetic > 0.0 ? w / std::sqrt(2.0 * kinetic / mass) : 0.0;
  };
  double total = 0.0;
  const double wall_end = m.plateau_begin();
  // Turning-point singularity ~ (x - x_t)^(-1/2): tanh-sinh handles it.
  boost::math::quadrature::tanh_sinh<double> singular;
  total += singular.integrate(inv_speed, x_t, wall_end, 1e-12);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (weight) {
    total += GK::integrate(inv_speed, wall_end, m.plateau_end(), 15, 1e-13);
  } else {
    total += (m.plateau_end() - wall_end) * std::sqrt(mass / (2.0 * (E - m.V)));
  }
  total += GK::integrate(inv_speed, m.plateau_end(), m.outer_edge(), 15, 1e-13);
  if (x_hi > m.outer_edge()) {
    if (weight) {
      total += GK::integrate(inv_speed, m.outer_edge(), x_hi, 15, 1e-13);
    } else {
      total += (x_hi - m.outer_edge()) * std::sqrt(mass / (2.0 * E));
    }
  }
  return 2.0 * total;
}

}  // namespace

double classical_dwell_time(const MirrorSpec& m, double E, double mass) {
  if (!(mass > 0.0)) throw DomainError("classical_dwell_time: mass must be > 0");
  if (E == m.V) {
    throw DomainError("classical_dwell_time: E == V, plateau speed vanishes and the dwell time diverges");
  }
  if (E < m.V) {
    throw DomainError(
        "classical_dwell_time: E < V, the particle turns back on the outer edge before reaching the plateau "
        "(no dwell near the mirror)");
  }
  return round_trip_integral(m, E, mass, m.outer_edge(), nullptr);
}

double classical_round_trip_time(const MirrorSpec& m, double E, double mass, double x_far) {
  if (!(E > m.V)) throw DomainError("classical_round_trip_time: requires E > V");
  if (x_far < m.outer_edge()) throw DomainError("classical_round_trip_time: x_far must be >= d + w");
  return round_trip_integral(m, E, mass, x_far, nullptr);
}

double weighted_round_trip_time(const MirrorSpec& m, double E, double mass, double x_far,
                                const std::function<double(double)>& weight) {
  if (!(E > m.V)) throw DomainError("weighted_round_trip_time: requires E > V");
  if (x_far < m.outer_edge()) throw DomainError("weighted_round_trip_time: x_far must be >= d + w");
  return round_trip_integral(m, E, mass, x_far, &weight);
}

}  // namespace abfield
