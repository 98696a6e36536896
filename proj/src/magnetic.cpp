#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "abfield/errors.hpp"
#include "abfield/scenarios.hpp"
#include "scenario_common.hpp"

namespace abfield {

MagneticPlan plan_magnetic(const SimulationConfig& config) {
  const MagneticSetup& setup = config.magnetic();
  setup.validate();
  if (!(setup.v > 0.0)) {
    throw ConfigError("setup.v", "must be > 0 to simulate (it sets the cylinders' de Broglie wavelength)");
  }
  const Constants k = Constants::gaussian_cgs();
  const ScalingMap map = ScalingMap::natural_for(setup.M, setup.v, k.hbar);

  MagneticPlan plan;
  plan.length_unit = map.length_unit();
  plan.time_unit = map.time_unit();
  plan.delta_v = cylinder_velocity_kick_quadrature(setup, k, config.tolerances.quadrature).value;
  plan.delta_p = plan.delta_v / setup.v;
  plan.transit = std::numbers::pi * setup.R / setup.u / map.time_unit();

  // Whole steps across the transit so both impulses land on step boundaries.
  const double transit_steps = std::max(1.0, std::ceil(plan.transit / config.dt - 1e-9));
  plan.dt = plan.transit / transit_steps;
  const double pre = std::round(config.schedule.pre_drift / plan.dt);
  const double post = std::round(config.schedule.post_drift / plan.dt);
  plan.t_entry = pre * plan.dt;
  plan.t_exit = (pre + transit_steps) * plan.dt;
  plan.steps = static_cast<std::size_t>(pre + transit_steps + post);
  plan.t_final = static_cast<double>(plan.steps) * plan.dt;
  plan.sigma0 = config.sigma0;

  const Tolerances& tol = config.tolerances;
  double x_min, x_max;
  if (config.grid.auto_extent()) {
    const double s0 = config.sigma0;
    const double spread = plan.t_final / (2.0 * s0);
    const double sigma_f = std::sqrt(s0 * s0 + spread * spread) + 2.0 * std::abs(plan.delta_p) * plan.transit;
    const double half = 0.5 * plan.t_final + (tol.boundary_band + 8.0) * sigma_f;
    x_min = -half;
    x_max = half;
  } else {
    x_min = *config.grid.x_min;
    x_max = *config.grid.x_max;
  }
  std::size_t points = config.grid.points;
  if (config.grid.auto_points()) {
    const double k_needed = 1.0 + std::abs(plan.delta_p) + 10.0 / (2.0 * config.sigma0);
    points = detail::auto_points(x_max - x_min, std::min(config.sigma0 / 4.0, std::numbers::pi / (2.0 * k_needed)));
  }
  plan.grid = std::make_shared<const Grid>(points, x_min, x_max);
  plan.guard_min = x_min + tol.boundary_band * config.sigma0;
  plan.guard_max = x_max - tol.boundary_band * config.sigma0;
  return plan;
}

ScenarioRun magnetic_scenario(const SimulationConfig& config) {
  const MagneticPlan plan = plan_magnetic(config);

  BranchOptions bo;
  bo.sample_every = config.schedule.sample_every;
  bo.dark_visibility = config.tolerances.dark_visibility;
  bo.norm_tolerance = config.tolerances.norm;
  bo.guard_min = plan.guard_min;
  bo.guard_max = plan.guard_max;
  bo.boundary_probability = config.tolerances.boundary_probability;

  // Cylinder surfaces move oppositely; in each branch they take opposite
  // impulses at entry and give them back at exit.
  auto run_cylinder = [&](double direction) {
    const double dp = direction * plan.delta_p;
    const BranchDrive left{zero_potential(), {{plan.t_entry, dp}, {plan.t_exit, -dp}}};
    const BranchDrive right{zero_potential(), {{plan.t_entry, -dp}, {plan.t_exit, dp}}};
    const GridState initial = init_gaussian(plan.grid, -direction * 0.5 * plan.t_final, direction, plan.sigma0);
    return run_branches(initial, left, right, plan.t_final, plan.dt, bo);
  };
  BranchResult first = run_cylinder(1.0);
  const BranchResult second = run_cylinder(-1.0);

  BranchResult combined = first;
  for (std::size_t i = 0; i < combined.times.size(); ++i) {
    combined.overlap[i] = first.overlap[i] * second.overlap[i];
    combined.visibility[i] = std::abs(combined.overlap[i]);
    combined.rel_phase[i] = first.rel_phase[i] + second.rel_phase[i];
    combined.guide_phase[i] = first.guide_phase[i] + second.guide_phase[i];
    combined.entropy[i] = entanglement_entropy(combined.overlap[i]);
  }
  combined.final_overlap = first.final_overlap * second.final_overlap;
  combined.final_phase = first.final_phase + second.final_phase;
  combined.anchored = first.anchored || second.anchored;
  combined.norm_drift = std::max(first.norm_drift, second.norm_drift);
  combined.boundary_probability = std::max(first.boundary_probability, second.boundary_probability);

  ScenarioRun run;
  ScenarioReport& rep = run.report;
  rep.experiment = ExperimentKind::magnetic;
  rep.analytic = consistency_report(config.magnetic(), Constants::gaussian_cgs());

  Propagator probe(plan.grid);
  const Moments m1L = probe.moments(first.final_L);
  const Moments m1R = probe.moments(first.final_R);
  const Moments m2L = probe.moments(second.final_L);
  const Moments m2R = probe.moments(second.final_R);
  rep.delta_x_final = m1L.mean_x - m1R.mean_x;
  rep.delta_p_final = m1L.mean_p - m1R.mean_p;
  rep.delta_x_over_sigma = std::abs(rep.delta_x_final) / plan.sigma0;
  rep.visibility_model =
      gaussian_visibility_model(rep.delta_x_final, rep.delta_p_final, plan.sigma0) *
      gaussian_visibility_model(m2L.mean_x - m2R.mean_x, m2L.mean_p - m2R.mean_p, plan.sigma0);

  rep.simulated_phase = combined.final_phase;
  // Each branch carries half of the inter-branch separation.
  rep.simulated_shift = 0.5 * rep.delta_x_final * plan.length_unit;
  rep.phase_error = detail::relative_error(rep.simulated_phase, rep.analytic.phi_ab);
  rep.shift_error = detail::relative_error(rep.simulated_shift, rep.analytic.delta_x);

  detail::summarize_series(combined, 1.0, rep);
  double ratio = rep.min_uncertainty_ratio;
  for (std::size_t i = 0; i < second.moments_L.size(); ++i) {
    for (const Moments* m : {&second.moments_L[i], &second.moments_R[i]}) {
      ratio = std::min(ratio, m->std_x * m->std_p / 0.5);
    }
  }
  rep.min_uncertainty_ratio = ratio;
  rep.t_final = plan.t_final;
  rep.dt = plan.dt;
  rep.steps = plan.steps;
  rep.grid_points = plan.grid->size();
  rep.x_min = plan.grid->x_min();
  rep.x_max = plan.grid->x_max();
  rep.sigma0 = plan.sigma0;
  rep.length_unit = plan.length_unit;
  rep.time_unit = plan.time_unit;
  run.series = std::move(combined);
  return run;
}

ScenarioRun run_scenario(const SimulationConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::electric: return electric_scenario(config);
    case ExperimentKind::magnetic: return magnetic_scenario(config);
    case ExperimentKind::null_check: break;
  }
  throw ConfigError("experiment", "null_check has no dynamic simulation; use the null-check command");
}

}  // namespace abfield
