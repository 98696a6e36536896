#include "abfield/commands.hpp"

#include <chrono>
#include <iostream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "abfield/analytic.hpp"
#include "abfield/charges.hpp"
#include "abfield/errors.hpp"
#include "abfield/io.hpp"
#include "abfield/scenarios.hpp"

namespace abfield {

namespace {

using Clock = std::chrono::steady_clock;

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

int guarded(const CommandContext& ctx, const std::function<void()>& body) {
  std::ostream& err = ctx.err ? *ctx.err : std::cerr;
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: config: " << one_line(e.what()) << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "error: numerical: " << one_line(e.what()) << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "error: numerical: " << one_line(e.what()) << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitFailure;
  }
}

SimulationConfig load(const CommandContext& ctx, std::optional<ExperimentKind> kind) {
  SimulationConfig config = load_config_file(ctx.config_path);
  if (kind && *kind != config.experiment) {
    throw ConfigError("experiment", fmt::format("config is '{}' but the command asked for '{}'",
                                                to_string(config.experiment), to_string(*kind)));
  }
  std::ostream& err = ctx.err ? *ctx.err : std::cerr;
  for (const auto& w : config.warnings) err << "warning: " << w << '\n';
  return config;
}

void write_record(const CommandContext& ctx, const SimulationConfig& config, const nlohmann::json& report,
                  Clock::time_point start) {
  RunRecord record;
  record.command = ctx.command_line;
  record.config_digest = config_digest(config);
  record.report = report;
  record.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  write_text_file(ctx.out_dir / "run.json", to_json(record).dump(2) + "\n");
}

std::ostream& out_stream(const CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }

}  // namespace

int cmd_analytic(const CommandContext& ctx, std::optional<ExperimentKind> kind) {
  return guarded(ctx, [&] {
    const auto start = Clock::now();
    const SimulationConfig config = load(ctx, kind);
    const Constants k = Constants::gaussian_cgs();
    ConsistencyReport report;
    switch (config.experiment) {
      case ExperimentKind::electric: report = consistency_report(config.electric(), k); break;
      case ExperimentKind::magnetic: report = consistency_report(config.magnetic(), k); break;
      case ExperimentKind::null_check:
        throw ConfigError("experiment", "analytic needs an electric or magnetic config");
    }
    const nlohmann::json doc = to_json(report);
    write_record(ctx, config, doc, start);
    out_stream(ctx) << doc.dump(2) << '\n';
  });
}

int cmd_simulate(const CommandContext& ctx, std::optional<ExperimentKind> kind) {
  return guarded(ctx, [&] {
    const auto start = Clock::now();
    const SimulationConfig config = load(ctx, kind);
    ScenarioRun run = run_scenario(config);
    const auto series_path = ctx.out_dir / "series.csv";
    run.report.series_path = series_path.filename().string();

    std::ostringstream csv;
    write_series_csv(csv, run.series);
    write_text_file(series_path, csv.str());
    const nlohmann::json doc = to_json(run.report);
    write_text_file(ctx.out_dir / "report.json", doc.dump(2) + "\n");
    write_record(ctx, config, doc, start);
    out_stream(ctx) << doc.dump(2) << '\n';
  });
}

int cmd_null_check(const CommandContext& ctx) {
  return guarded(ctx, [&] {
    const auto start = Clock::now();
    const SimulationConfig config = load(ctx, ExperimentKind::null_check);
    const NullCheckSetup& s = config.null_check();
    const nlohmann::json doc = to_json(triggered_null_scenario(s.r, s.Q, Constants::gaussian_cgs()));
    write_text_file(ctx.out_dir / "null_check.json", doc.dump(2) + "\n");
    write_record(ctx, config, doc, start);
    out_stream(ctx) << doc.dump(2) << '\n';
  });
}

int cmd_sweep(const CommandContext& ctx, const std::string& param, const std::vector<double>& values) {
  return guarded(ctx, [&] {
    const auto start = Clock::now();
    const SimulationConfig config = load(ctx, std::nullopt);
    if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
    const auto rows = parameter_sweep(config, param, values);
    std::ostringstream csv;
    write_sweep_csv(csv, param, rows);
    write_text_file(ctx.out_dir / "sweep.csv", csv.str());
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& row : rows) reports.push_back({{"value", row.value}, {"report", to_json(row.report)}});
    write_record(ctx, config, reports, start);
    out_stream(ctx) << csv.str();
  });
}

int cmd_convergence(const CommandContext& ctx, const std::vector<std::size_t>& grids, const std::vector<double>& dts) {
  return guarded(ctx, [&] {
    const auto start = Clock::now();
    const SimulationConfig config = load(ctx, std::nullopt);
    const auto rows = convergence_study(config, grids, dts);
    std::ostringstream csv;
    write_convergence_csv(csv, rows);
    write_text_file(ctx.out_dir / "convergence.csv", csv.str());
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : rows) {
      table.push_back({{"points", row.points},
                       {"dt", row.dt},
                       {"simulated_phase", row.simulated_phase},
                       {"phase_error", row.phase_error},
                       {"self_convergence", row.self_convergence ? nlohmann::json(*row.self_convergence) : nlohmann::json(nullptr)},
                       {"norm_drift", row.norm_drift}});
    }
    write_record(ctx, config, table, start);
    out_stream(ctx) << csv.str();
  });
}

}  // namespace abfield
