#include "abfield/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace abfield {

using nlohmann::json;

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

json to_json(const ConsistencyReport& r) {
  return json{{"phi_ab", r.phi_ab},
              {"delta_x", r.delta_x},
              {"delta_v", r.delta_v},
              {"lambda", r.lambda},
              {"phi_from_shift", r.phi_from_shift},
              {"flux", r.flux ? json(*r.flux) : json(nullptr)},
              {"relative_residual", r.relative_residual}};
}

json to_json(const ScenarioReport& r) {
  json doc;
  doc["experiment"] = std::string(to_string(r.experiment));
  doc["analytic"] = to_json(r.analytic);
  doc["simulated_phase"] = r.simulated_phase;
  doc["simulated_shift"] = r.simulated_shift;
  doc["final_visibility"] = r.final_visibility;
  doc["final_entropy"] = r.final_entropy;
  doc["phase_error"] = r.phase_error;
  doc["shift_error"] = r.shift_error;
  doc["series_path"] = r.series_path;
  doc["diagnostics"] = {
      {"visibility_model", r.visibility_model},
      {"delta_x_final", r.delta_x_final},
      {"delta_p_final", r.delta_p_final},
      {"delta_x_over_sigma", r.delta_x_over_sigma},
      {"min_visibility", r.min_visibility},
      {"max_entropy", r.max_entropy},
      {"min_uncertainty_ratio", r.min_uncertainty_ratio},
      {"norm_drift", r.norm_drift},
      {"boundary_probability", r.boundary_probability},
      {"phase_anchored", r.phase_anchored},
      {"t_final", r.t_final},
      {"dt", r.dt},
      {"steps", r.steps},
      {"grid_points", r.grid_points},
      {"x_min", r.x_min},
      {"x_max", r.x_max},
      {"sigma0", r.sigma0},
      {"length_unit_cm", r.length_unit},
      {"time_unit_s", r.time_unit},
  };
  return doc;
}

json to_json(const NullCheckReport& r) {
  json particles = json::array();
  for (const auto& p : r.residuals) {
    particles.push_back({{"label", p.label},
                         {"position", {p.position.x, p.position.y}},
                         {"field", {p.field.x, p.field.y}},
                         {"magnitude", p.magnitude},
                         {"normalized", p.normalized}});
  }
  return json{{"Q", r.Q},
              {"r", r.r},
              {"particles", particles},
              {"max_normalized_residual", r.max_normalized_residual},
              {"predicted_phase", r.predicted_phase ? json(*r.predicted_phase) : json(nullptr)},
              {"status", r.status}};
}

void write_series_csv(std::ostream& out, const BranchResult& s) {
  for (std::size_t c = 0; c < kSeriesColumns.size(); ++c) out << (c ? "," : "") << kSeriesColumns[c];
  out << '\n';
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << format_number(s.times[i]) << ',' << format_number(s.overlap[i].real()) << ','
        << format_number(s.overlap[i].imag()) << ',' << format_number(s.visibility[i]) << ','
        << format_number(s.rel_phase[i]) << ',' << format_number(s.entropy[i]) << ','
        << format_number(s.moments_L[i].mean_x) << ',' << format_number(s.moments_R[i].mean_x) << ','
        << format_number(s.moments_L[i].mean_p) << ',' << format_number(s.moments_R[i].mean_p) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::string_view param, const std::vector<SweepRow>& rows) {
  out << param << ",phi_ab,simulated_phase,visibility_sim,visibility_model,phase_error\n";
  for (const auto& row : rows) {
    out << format_number(row.value) << ',' << format_number(row.report.analytic.phi_ab) << ','
        << format_number(row.report.simulated_phase) << ',' << format_number(row.report.final_visibility) << ','
        << format_number(row.report.visibility_model) << ',' << format_number(row.report.phase_error) << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "points,dt,simulated_phase,phase_error,self_convergence,norm_drift\n";
  for (const auto& row : rows) {
    out << row.points << ',' << format_number(row.dt) << ',' << format_number(row.simulated_phase) << ','
        << format_number(row.phase_error) << ','
        << (row.self_convergence ? format_number(*row.self_convergence) : std::string()) << ','
        << format_number(row.norm_drift) << '\n';
  }
}

std::string config_digest(const SimulationConfig& config) {
  const std::string text = to_json(config).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("config_digest: SHA-256 failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

json to_json(const RunRecord& r) {
  return json{{"schema_version", r.schema_version},
              {"command", r.command},
              {"config_digest", r.config_digest},
              {"report", r.report},
              {"wall_time", r.wall_time}};
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace abfield
