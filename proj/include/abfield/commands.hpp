#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "abfield/config.hpp"

namespace abfield {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

struct CommandContext {
  std::string config_path;
  std::filesystem::path out_dir = "out";
  /// Recorded verbatim in run.json.
  std::string command_line;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

/// Each command prints its result to ctx.out, writes files under
/// ctx.out_dir, and returns an exit code. Failures print one line starting
/// with "error:" to ctx.err. `kind`, when given, must match the config.
int cmd_analytic(const CommandContext& ctx, std::optional<ExperimentKind> kind = std::nullopt);
int cmd_simulate(const CommandContext& ctx, std::optional<ExperimentKind> kind = std::nullopt);
int cmd_null_check(const CommandContext& ctx);
int cmd_sweep(const CommandContext& ctx, const std::string& param, const std::vector<double>& values);
int cmd_convergence(const CommandContext& ctx, const std::vector<std::size_t>& grids, const std::vector<double>& dts);

}  // namespace abfield
