#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "abfield/analytic.hpp"
#include "abfield/branches.hpp"
#include "abfield/config.hpp"
#include "abfield/mirror.hpp"

namespace abfield {

/// Relative errors are taken against max(|reference|, kErrorFloor).
inline constexpr double kErrorFloor = 1e-12;

struct ScenarioReport {
  ExperimentKind experiment = ExperimentKind::electric;
  ConsistencyReport analytic;
  double simulated_phase = 0.0;  // rad
  double simulated_shift = 0.0;  // cm
  double final_visibility = 0.0;
  double final_entropy = 0.0;    // nats
  double phase_error = 0.0;
  double shift_error = 0.0;
  std::string series_path;

  // Diagnostics, simulation units unless noted.
  double visibility_model = 0.0;  // displaced-Gaussian overlap from the measured final offsets
  double delta_x_final = 0.0;     // <x>_L - <x>_R at t_final (first source / cylinder)
  double delta_p_final = 0.0;
  double delta_x_over_sigma = 0.0;
  double min_visibility = 0.0;
  double max_entropy = 0.0;
  double min_uncertainty_ratio = 0.0;  // min over samples of std_x std_p / (hbar/2)
  double norm_drift = 0.0;
  double boundary_probability = 0.0;
  bool phase_anchored = false;
  double t_final = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t grid_points = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double sigma0 = 0.0;
  double length_unit = 0.0;  // cm per simulation length unit
  double time_unit = 0.0;    // s per simulation time unit
};

struct ScenarioRun {
  ScenarioReport report;
  /// Series for output. For the magnetic run the overlap and phase are the
  /// products/sums over both cylinders and the moments are cylinder 1's.
  BranchResult series;
};

// Electric experiment -------------------------------------------------------

/// Resolved electric schedule in simulation units (hbar = M = v = 1).
struct ElectricPlan {
  double length_unit = 0.0;
  double time_unit = 0.0;
  MirrorSpec mirror;
  double energy = 0.0;        // source energy, V + 1/2
  double far_speed = 0.0;     // sqrt(2 E)
  double coupling = 0.0;      // e Q / r in simulation energy units
  double r = 0.0;             // simulation lengths
  double softening = 0.0;     // s = d/2
  double x_A = 0.0;           // mirror-A reference point on the source axis
  double T = 0.0;
  double tau = 0.0;
  double sigma0 = 0.0;
  double sigma_plateau = 0.0; // sigma0 v / v_far
  double x_start = 0.0;
  double p_start = 0.0;
  double round_trip = 0.0;    // classical, from x_start
  double gate_center = 0.0;
  double gate_ramp = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double t_final = 0.0;
  std::shared_ptr<const Grid> grid;
  double guard_min = 0.0;
  double guard_max = 0.0;
};

/// Throws ConfigError when the setup cannot be scheduled (T too short for the
/// mirror, tau too short to cover the source's passage, r inside the mirror).
ElectricPlan plan_electric(const SimulationConfig& config);

/// Electron presence factor at mirror A, 0..1.
double electron_gate(const ElectricPlan& plan, double t) noexcept;

/// V_int(x) = -e Q S(x) / sqrt((x - x_A)^2 + s^2) without the gate.
double electric_interaction(const ElectricPlan& plan, double x) noexcept;

struct ElectricOptions {
  /// Apply the interaction in both branches (control experiment).
  bool control = false;
};

ScenarioRun electric_scenario(const SimulationConfig& config, const ElectricOptions& options = {});

// Magnetic experiment -------------------------------------------------------

struct MagneticPlan {
  double length_unit = 0.0;
  double time_unit = 0.0;
  double delta_v = 0.0;          // cm/s, finite-length quadrature
  double delta_p = 0.0;          // simulation momentum units
  double transit = 0.0;          // pi R / u in simulation time
  double t_entry = 0.0;
  double t_exit = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double t_final = 0.0;
  double sigma0 = 0.0;
  std::shared_ptr<const Grid> grid;
  double guard_min = 0.0;
  double guard_max = 0.0;
};

MagneticPlan plan_magnetic(const SimulationConfig& config);

ScenarioRun magnetic_scenario(const SimulationConfig& config);

/// Dispatch on config.experiment; null_check configs throw ConfigError.
ScenarioRun run_scenario(const SimulationConfig& config);

// Sweeps --------------------------------------------------------------------

/// Copy of `config` with one numeric field replaced. `param` is a dotted
/// path into the config document ("sigma0", "setup.Q", "mirror.V", ...);
/// the result is revalidated.
SimulationConfig with_parameter(const SimulationConfig& config, const std::string& param, double value);

struct SweepRow {
  double value = 0.0;
  ScenarioReport report;
};

/// One scenario per value, spread over `workers` threads (0 = hardware
/// concurrency). Rows come back in input order.
std::vector<SweepRow> parameter_sweep(const SimulationConfig& config, const std::string& param,
                                      const std::vector<double>& values, unsigned workers = 0);

struct DecoherenceRow {
  double sigma = 0.0;
  double delta_x_over_sigma = 0.0;
  double visibility_sim = 0.0;
  double visibility_model = 0.0;
  ScenarioReport report;
};

std::vector<DecoherenceRow> decoherence_sweep(const SimulationConfig& config, const std::vector<double>& sigma_values,
                                              unsigned workers = 0);

struct ConvergenceRow {
  std::size_t points = 0;
  double dt = 0.0;
  double simulated_phase = 0.0;
  double phase_error = 0.0;
  /// |phase(dt) - phase(next smaller dt)| on the same grid; absent for the
  /// smallest dt. Successive ratios give the Richardson factor.
  std::optional<double> self_convergence;
  double norm_drift = 0.0;
};

std::vector<ConvergenceRow> convergence_study(const SimulationConfig& config, const std::vector<std::size_t>& grids,
                                              const std::vector<double>& dts, unsigned workers = 0);

}  // namespace abfield
