#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "abfield/errors.hpp"
#include "abfield/scenarios.hpp"
#include "scenario_common.hpp"

namespace abfield {

namespace {

// Interaction profile normalized to 1 at the plateau center.
struct InteractionShape {
  MirrorSpec mirror;
  double r = 0.0;
  double s = 0.0;
  double x_A = 0.0;

  InteractionShape(const MirrorSpec& m, double r_sim) : mirror(m), r(r_sim), s(0.5 * m.d) {
    // x_A sits so that the distance at the plateau center d/2 is exactly r.
    x_A = 0.5 * m.d - std::sqrt((r - s) * (r + s));
  }

  double operator()(double x) const noexcept {
    const double u = x - x_A;
    return near_mirror_weight(x, mirror) * r / std::sqrt(u * u + s * s);
  }
};

double round_trip_for(double d, const MirrorConfig& mc, double E, double r_sim) {
  MirrorSpec m{mc.V, d, mc.w, mc.wall_scale};
  const InteractionShape shape(m, r_sim);
  return weighted_round_trip_time(m, E, 1.0, m.outer_edge(), std::cref(shape));
}

}  // namespace

ElectricPlan plan_electric(const SimulationConfig& config) {
  const ElectricSetup& setup = config.electric();
  setup.validate();
  const Constants k = Constants::gaussian_cgs();
  const ScalingMap map = ScalingMap::natural_for(setup.M, setup.v, k.hbar);

  ElectricPlan plan;
  plan.length_unit = map.length_unit();
  plan.time_unit = map.time_unit();
  plan.T = setup.T / map.time_unit();
  plan.tau = setup.tau / map.time_unit();
  plan.r = setup.r / map.length_unit();
  plan.coupling = k.e_charge * setup.Q / setup.r / map.energy_unit();

  const MirrorConfig& mc = config.mirror;
  plan.energy = mc.V + 0.5;
  plan.far_speed = std::sqrt(2.0 * plan.energy);

  // Plateau width: the interaction-weighted round trip must last T.
  const double d_min = std::max(10.0 * mc.wall_scale, 4.0 * mc.w);
  if (!(plan.r > 0.5 * d_min)) {
    throw ConfigError("setup.r", fmt::format("r = {} simulation lengths is inside the mirror (needs > {})", plan.r,
                                             0.5 * d_min));
  }
  auto residual = [&](double d) { return round_trip_for(d, mc, plan.energy, plan.r) - plan.T; };
  const double f_lo = residual(d_min);
  if (f_lo > 0.0) {
    throw ConfigError("setup.T", fmt::format("T = {} simulation times is shorter than the minimum mirror dwell {} "
                                             "(mirror.w = {}, mirror.wall_scale = {})",
                                             plan.T, f_lo + plan.T, mc.w, mc.wall_scale));
  }
  double d_hi = d_min + plan.T + 10.0 * (mc.w + mc.wall_scale);
  if (!(2.0 * plan.r > d_hi)) {
    throw ConfigError("setup.r", fmt::format("r = {} simulation lengths is too close for a plateau of width ~{}",
                                             plan.r, d_hi));
  }
  std::uintmax_t iterations = 100;
  const auto bracket = boost::math::tools::toms748_solve(
      residual, d_min, d_hi, f_lo, residual(d_hi), boost::math::tools::eps_tolerance<double>(50), iterations);
  const double d = 0.5 * (bracket.first + bracket.second);
  plan.mirror = MirrorSpec{mc.V, d, mc.w, mc.wall_scale};
  plan.mirror.validate();
  const InteractionShape shape(plan.mirror, plan.r);
  plan.softening = shape.s;
  plan.x_A = shape.x_A;

  plan.sigma0 = config.sigma0;
  plan.sigma_plateau = config.sigma0 / plan.far_speed;
  plan.x_start = plan.mirror.outer_edge() + config.schedule.approach_margin * config.sigma0;
  plan.p_start = -plan.far_speed;
  plan.round_trip = classical_round_trip_time(plan.mirror, plan.energy, 1.0, plan.x_start);

  // Electron window centered on the classical turning time.
  plan.gate_center = 0.5 * plan.round_trip;
  plan.gate_ramp = 0.05 * plan.tau;
  const double passage = classical_dwell_time(plan.mirror, plan.energy, 1.0);
  if (plan.tau - 2.0 * plan.gate_ramp < passage) {
    throw ConfigError("setup.tau",
                      fmt::format("electron window tau = {} (flat part {}) does not cover the source's passage "
                                  "through the mirror region, {} simulation times",
                                  plan.tau, 0.9 * plan.tau, passage));
  }

  const double t_target = config.schedule.t_final.value_or(plan.round_trip);
  const double steps = std::max(1.0, std::round(t_target / config.dt));
  plan.steps = static_cast<std::size_t>(steps);
  plan.dt = config.dt;
  plan.t_final = steps * config.dt;

  const Tolerances& tol = config.tolerances;
  double x_min, x_max;
  if (config.grid.auto_extent()) {
    const double s0 = config.sigma0;
    const double spread = plan.t_final / (2.0 * s0);
    const double dwell = plan.T * plan.far_speed * plan.far_speed / (2.0 * s0);
    const double shift = plan.far_speed * std::abs(plan.coupling) * plan.T;
    const double sigma_f = std::sqrt(s0 * s0 + spread * spread + dwell * dwell) + shift;
    x_min = -10.0 * mc.wall_scale;
    // A small part of the packet is reflected by the outer edge on the way
    // in and keeps moving outward for the rest of the run; it must not reach
    // the seam either.
    const double free_width = std::hypot(s0, spread);
    const double reflected = 2.0 * plan.mirror.outer_edge() - plan.x_start + plan.far_speed * plan.t_final;
    x_max = std::max(plan.x_start + (tol.boundary_band + 8.0) * sigma_f,
                     reflected + (tol.boundary_band + 8.0) * free_width);
  } else {
    x_min = *config.grid.x_min;
    x_max = *config.grid.x_max;
  }
  std::size_t points = config.grid.points;
  if (config.grid.auto_points()) {
    const double k_needed = plan.far_speed + 10.0 / (2.0 * config.sigma0);
    const double dx_target =
        std::min({config.sigma0 / 4.0, mc.wall_scale / 4.0, std::numbers::pi / (2.0 * k_needed)});
    points = detail::auto_points(x_max - x_min, dx_target);
  }
  plan.grid = std::make_shared<const Grid>(points, x_min, x_max);
  // The wall is not resolved on the grid, so the wavefunction leaks a short
  // numerical tail just past x = 0; the seam check looks deeper in the cap.
  plan.guard_min = 0.5 * x_min;
  plan.guard_max = x_max - tol.boundary_band * config.sigma0;
  return plan;
}

double electron_gate(const ElectricPlan& plan, double t) noexcept {
  const double half = 0.5 * plan.tau;
  const double on = smoothstep((t - (plan.gate_center - half)) / plan.gate_ramp);
  const double off = smoothstep((t - (plan.gate_center + half - plan.gate_ramp)) / plan.gate_ramp);
  return on * (1.0 - off);
}

double electric_interaction(const ElectricPlan& plan, double x) noexcept {
  const double u = x - plan.x_A;
  return -plan.coupling * near_mirror_weight(x, plan.mirror) * plan.r /
         std::sqrt(u * u + plan.softening * plan.softening);
}

ScenarioRun electric_scenario(const SimulationConfig& config, const ElectricOptions& options) {
  const ElectricPlan plan = plan_electric(config);
  const Grid& grid = *plan.grid;
  const auto xs = grid.positions();

  auto mirror_table = std::make_shared<std::vector<double>>(xs.size());
  auto interaction_table = std::make_shared<std::vector<double>>(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    (*mirror_table)[j] = mirror_potential(xs[j], plan.mirror);
    (*interaction_table)[j] = electric_interaction(plan, xs[j]);
  }

  auto make_potential = [&](bool interacting) -> Potential {
    return [=, &plan](std::span<const double> x, double t, std::span<double> out) {
      const double g = interacting ? electron_gate(plan, t) : 0.0;
      if (x.data() == xs.data()) {
        for (std::size_t j = 0; j < x.size(); ++j) out[j] = (*mirror_table)[j] + g * (*interaction_table)[j];
      } else {
        for (std::size_t j = 0; j < x.size(); ++j) {
          out[j] = mirror_potential(x[j], plan.mirror) + g * electric_interaction(plan, x[j]);
        }
      }
    };
  };
  const Potential V_L = make_potential(true);
  const Potential V_R = make_potential(options.control);

  BranchOptions bo;
  bo.sample_every = config.schedule.sample_every;
  bo.dark_visibility = config.tolerances.dark_visibility;
  bo.norm_tolerance = config.tolerances.norm;
  bo.guard_min = plan.guard_min;
  bo.guard_max = plan.guard_max;
  bo.boundary_probability = config.tolerances.boundary_probability;

  const GridState initial = init_gaussian(plan.grid, plan.x_start, plan.p_start, plan.sigma0);
  BranchResult branches = run_branches(initial, V_L, V_R, plan.t_final, plan.dt, bo);

  ScenarioRun run;
  ScenarioReport& rep = run.report;
  rep.experiment = ExperimentKind::electric;
  rep.analytic = consistency_report(config.electric(), Constants::gaussian_cgs());

  Propagator probe(plan.grid);
  const Moments mL = probe.moments(branches.final_L);
  const Moments mR = probe.moments(branches.final_R);
  rep.delta_x_final = mL.mean_x - mR.mean_x;
  rep.delta_p_final = mL.mean_p - mR.mean_p;
  rep.delta_x_over_sigma = std::abs(rep.delta_x_final) / plan.sigma0;
  rep.visibility_model = gaussian_visibility_model(rep.delta_x_final, rep.delta_p_final, plan.sigma0);

  // Two mirror-symmetric sources contribute equally.
  rep.simulated_phase = 2.0 * branches.final_phase;
  // The left-branch source leaves the plateau early by dt = dx/v_out; on the
  // plateau (speed 1) that is a shift of dx/v_out along the approach axis.
  const double shift_sim = -rep.delta_x_final / mR.mean_p;
  rep.simulated_shift = shift_sim * plan.length_unit;
  rep.phase_error = detail::relative_error(rep.simulated_phase, rep.analytic.phi_ab);
  rep.shift_error = detail::relative_error(rep.simulated_shift, rep.analytic.delta_x);

  detail::summarize_series(branches, 1.0, rep);
  rep.t_final = plan.t_final;
  rep.dt = plan.dt;
  rep.steps = plan.steps;
  rep.grid_points = grid.size();
  rep.x_min = grid.x_min();
  rep.x_max = grid.x_max();
  rep.sigma0 = plan.sigma0;
  rep.length_unit = plan.length_unit;
  rep.time_unit = plan.time_unit;
  run.series = std::move(branches);
  return run;
}

}  // namespace abfield
