#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "abfield/errors.hpp"
#include "abfield/scenarios.hpp"
#include "scenario_common.hpp"

namespace abfield {

namespace {

// Runs job(i) for i < count on a small pool; the first exception wins and is
// rethrown after all workers join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SimulationConfig with_parameter(const SimulationConfig& config, const std::string& param, double value) {
  nlohmann::json doc = to_json(config);
  nlohmann::json* node = &doc;
  std::stringstream path(param);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(path, key, '.')) keys.push_back(key);
  if (keys.empty()) throw ConfigError("param", "empty parameter name");
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object() || !node->contains(keys[i])) throw ConfigError(param, "unknown parameter");
    node = &(*node)[keys[i]];
  }
  if (!node->is_object() || !node->contains(keys.back())) throw ConfigError(param, "unknown parameter");
  nlohmann::json& target = (*node)[keys.back()];
  const bool integral_key = param == "grid.points" || param == "schedule.sample_every";
  if (integral_key || target.is_number_integer()) {
    if (value != std::floor(value) || value < 0.0) {
      throw ConfigError(param, fmt::format("must be a non-negative integer (got {})", value));
    }
    target = static_cast<std::uint64_t>(value);
  } else if (target.is_number() || target.is_string()) {
    target = value;
  } else {
    throw ConfigError(param, "not a numeric parameter");
  }
  return load_config(doc.dump());
}

std::vector<SweepRow> parameter_sweep(const SimulationConfig& config, const std::string& param,
                                      const std::vector<double>& values, unsigned workers) {
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  std::vector<SimulationConfig> configs;
  configs.reserve(values.size());
  for (double v : values) configs.push_back(with_parameter(config, param, v));
  std::vector<SweepRow> rows(values.size());
  parallel_for(values.size(), workers, [&](std::size_t i) {
    rows[i].value = values[i];
    rows[i].report = run_scenario(configs[i]).report;
  });
  return rows;
}

std::vector<DecoherenceRow> decoherence_sweep(const SimulationConfig& config, const std::vector<double>& sigma_values,
                                              unsigned workers) {
  const auto sweep = parameter_sweep(config, "sigma0", sigma_values, workers);
  std::vector<DecoherenceRow> rows;
  rows.reserve(sweep.size());
  for (const auto& s : sweep) {
    rows.push_back(DecoherenceRow{
        .sigma = s.value,
        .delta_x_over_sigma = s.report.delta_x_over_sigma,
        .visibility_sim = s.report.final_visibility,
        .visibility_model = s.report.visibility_model,
        .report = s.report,
    });
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_study(const SimulationConfig& config, const std::vector<std::size_t>& grids,
                                              const std::vector<double>& dts, unsigned workers) {
  if (grids.empty()) throw ConfigError("grids", "convergence needs at least one grid size");
  if (dts.empty()) throw ConfigError("dts", "convergence needs at least one dt");
  std::vector<SimulationConfig> configs;
  std::vector<ConvergenceRow> rows;
  for (std::size_t points : grids) {
    for (double dt : dts) {
      SimulationConfig c = with_parameter(config, "grid.points", static_cast<double>(points));
      configs.push_back(with_parameter(c, "dt", dt));
      ConvergenceRow row;
      row.points = points;
      row.dt = dt;
      rows.push_back(row);
    }
  }
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    const ScenarioReport rep = run_scenario(configs[i]).report;
    rows[i].simulated_phase = rep.simulated_phase;
    rows[i].phase_error = rep.phase_error;
    rows[i].norm_drift = rep.norm_drift;
  });
  // Pair each dt with the next smaller one on the same grid.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow* finer = nullptr;
    for (const auto& other : rows) {
      if (other.points != rows[i].points || !(other.dt < rows[i].dt)) continue;
      if (finer == nullptr || other.dt > finer->dt) finer = &other;
    }
    if (finer != nullptr) rows[i].self_convergence = std::abs(rows[i].simulated_phase - finer->simulated_phase);
  }
  return rows;
}

}  // namespace abfield
