#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "abfield/mirror.hpp"
#include "abfield/units.hpp"

namespace abfield {

enum class ExperimentKind { electric, magnetic, null_check };

std::string_view to_string(ExperimentKind kind) noexcept;

/// Grid request. `points == 0` asks the planner to pick the smallest power of
/// two meeting the resolution limits; an empty `extent` asks it to size the
/// box from the classical trajectory.
struct GridSpec {
  std::size_t points = 4096;
  std::optional<double> x_min;
  std::optional<double> x_max;

  bool auto_points() const noexcept { return points == 0; }
  bool auto_extent() const noexcept { return !x_min.has_value(); }
  bool operator==(const GridSpec&) const = default;
};

/// Piecewise source schedule. Electric runs use approach_margin (packet start
/// distance beyond the mirror edge, in units of sigma0) and an optional
/// t_final override; magnetic runs use pre_drift / post_drift around the
/// transit. Times are in simulation units.
struct ScheduleSpec {
  std::size_t sample_every = 10;
  double approach_margin = 6.0;
  std::optional<double> t_final;
  double pre_drift = 10.0;
  double post_drift = 10.0;

  bool operator==(const ScheduleSpec&) const = default;
};

struct Tolerances {
  double phase = 0.02;
  double shift = 0.05;
  double visibility = 0.02;
  double norm = 1e-10;
  double boundary_probability = 1e-12;
  double boundary_band = 4.0;  // in units of sigma0
  double quadrature = 1e-10;
  double dark_visibility = 0.5;

  bool operator==(const Tolerances&) const = default;
};

/// Mirror settings as read from config. `d` is only meaningful outside the
/// electric scenario, which derives the plateau width from setup.T.
struct MirrorConfig {
  double V = 1.5;
  std::optional<double> d;
  double w = 10.0;
  double wall_scale = 2.0;

  bool operator==(const MirrorConfig&) const = default;
};

using Setup = std::variant<ElectricSetup, MagneticSetup, NullCheckSetup>;

struct SimulationConfig {
  ExperimentKind experiment = ExperimentKind::electric;
  Setup setup;
  GridSpec grid;
  double dt = 0.05;
  double sigma0 = 40.0;  // far-region packet width; magnetic configs default to 100
  ScheduleSpec schedule;
  MirrorConfig mirror;
  Tolerances tolerances;
  std::vector<std::string> warnings;

  const ElectricSetup& electric() const;
  const MagneticSetup& magnetic() const;
  const NullCheckSetup& null_check() const;

  bool operator==(const SimulationConfig& other) const;
};

/// Parses and validates a JSON config document. Throws ConfigError naming the
/// offending field on any parse or validation failure; unknown keys are errors.
SimulationConfig load_config(std::string_view text);
SimulationConfig load_config_file(const std::string& path);

/// Fully resolved document (defaults filled); reparses to an equal config.
nlohmann::json to_json(const SimulationConfig& config);

}  // namespace abfield
