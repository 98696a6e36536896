#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "abfield/analytic.hpp"
#include "abfield/charges.hpp"
#include "abfield/config.hpp"
#include "abfield/scenarios.hpp"

namespace abfield {

inline constexpr const char* kSchemaVersion = "1";

inline const std::vector<std::string> kSeriesColumns = {
    "t", "re_overlap", "im_overlap", "visibility", "rel_phase", "entropy",
    "mean_x_L", "mean_x_R", "mean_p_L", "mean_p_R"};

/// Keys exactly: phi_ab, delta_x, delta_v, lambda, phi_from_shift, flux, relative_residual.
nlohmann::json to_json(const ConsistencyReport& report);
nlohmann::json to_json(const ScenarioReport& report);
nlohmann::json to_json(const NullCheckReport& report);

/// %.17g, so every double survives a text round trip.
std::string format_number(double value);

void write_series_csv(std::ostream& out, const BranchResult& series);
void write_sweep_csv(std::ostream& out, std::string_view param, const std::vector<SweepRow>& rows);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Hex SHA-256 of the resolved config document.
std::string config_digest(const SimulationConfig& config);

struct RunRecord {
  std::string schema_version = kSchemaVersion;
  std::string command;
  std::string config_digest;
  nlohmann::json report;
  double wall_time = 0.0;  // s
};

nlohmann::json to_json(const RunRecord& record);

/// Writes `content` to `path`, creating parent directories. Throws
/// std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace abfield
