// Command-line front end: analytic | simulate | null-check | sweep | convergence.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abfield/commands.hpp"

namespace {

// Comma-separated list; an empty string gives an empty list.
template <class T>
std::optional<std::vector<T>> parse_list(const std::string& text) {
  std::vector<T> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::istringstream field(item);
    T v{};
    if (!(field >> v) || !field.eof()) return std::nullopt;
    values.push_back(v);
  }
  return values;
}

std::optional<abfield::ExperimentKind> parse_kind(const std::string& kind) {
  if (kind == "electric") return abfield::ExperimentKind::electric;
  if (kind == "magnetic") return abfield::ExperimentKind::magnetic;
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aharonov-Bohm source-shift simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string kind;
  std::string param;
  std::string values_text;
  std::string grids_text;
  std::string dts_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
  };

  auto* analytic = app.add_subcommand("analytic", "closed-form phase and shift consistency report");
  add_common(analytic);
  analytic->add_option("--kind", kind, "electric|magnetic (must match the config)")
      ->check(CLI::IsMember({"electric", "magnetic"}));

  auto* simulate = app.add_subcommand("simulate", "run the dynamic scenario, write report.json and series.csv");
  add_common(simulate);
  simulate->add_option("--kind", kind, "electric|magnetic (must match the config)")
      ->check(CLI::IsMember({"electric", "magnetic"}));

  auto* null_check = app.add_subcommand("null-check", "field residuals of the triggered-charges setup");
  add_common(null_check);

  auto* sweep = app.add_subcommand("sweep", "one simulation per parameter value, CSV table");
  add_common(sweep);
  sweep->add_option("--param", param, "dotted config field, e.g. sigma0 or setup.Q")->required();
  sweep->add_option("--values", values_text, "comma-separated values")->required();

  auto* convergence = app.add_subcommand("convergence", "phase error and norm drift per grid size and dt");
  add_common(convergence);
  convergence->add_option("--grids", grids_text, "comma-separated point counts")->required();
  convergence->add_option("--dts", dts_text, "comma-separated time steps")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return abfield::kExitConfig;
  }

  std::string command_line;
  for (int i = 1; i < argc; ++i) command_line += (i > 1 ? " " : "") + std::string(argv[i]);
  const abfield::CommandContext ctx{config_path, out_dir, command_line, &std::cout, &std::cerr};

  if (analytic->parsed()) return abfield::cmd_analytic(ctx, parse_kind(kind));
  if (simulate->parsed()) return abfield::cmd_simulate(ctx, parse_kind(kind));
  if (null_check->parsed()) return abfield::cmd_null_check(ctx);
  if (sweep->parsed()) {
    const auto values = parse_list<double>(values_text);
    if (!values) {
      std::cerr << "error: config: values: not a comma-separated list of numbers\n";
      return abfield::kExitConfig;
    }
    return abfield::cmd_sweep(ctx, param, *values);
  }
  const auto grids = parse_list<std::size_t>(grids_text);
  const auto dts = parse_list<double>(dts_text);
  if (!grids || !dts) {
    std::cerr << "error: config: grids/dts: not a comma-separated list of numbers\n";
    return abfield::kExitConfig;
  }
  return abfield::cmd_convergence(ctx, *grids, *dts);
}
