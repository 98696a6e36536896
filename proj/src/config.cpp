#include "abfield/config.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "abfield/errors.hpp"

namespace abfield {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::electric: return "electric";
    case ExperimentKind::magnetic: return "magnetic";
    case ExperimentKind::null_check: return "null_check";
  }
  return "unknown";
}

const ElectricSetup& SimulationConfig::electric() const {
  if (auto* s = std::get_if<ElectricSetup>(&setup)) return *s;
  throw ConfigError("experiment", "not an electric experiment");
}

const MagneticSetup& SimulationConfig::magnetic() const {
  if (auto* s = std::get_if<MagneticSetup>(&setup)) return *s;
  throw ConfigError("experiment", "not a magnetic experiment");
}

const NullCheckSetup& SimulationConfig::null_check() const {
  if (auto* s = std::get_if<NullCheckSetup>(&setup)) return *s;
  throw ConfigError("experiment", "not a null_check experiment");
}

bool SimulationConfig::operator==(const SimulationConfig& other) const {
  return experiment == other.experiment && setup == other.setup && grid == other.grid && dt == other.dt &&
         sigma0 == other.sigma0 && schedule == other.schedule && mirror == other.mirror &&
         tolerances == other.tolerances;
}

namespace {

void reject_unknown(const json& object, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : object.items()) {
    if (!keys.contains(key)) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

const json& require_object(const json& parent, const char* key, const std::string& path) {
  if (!parent.contains(key)) throw ConfigError(path, "missing required object");
  const json& node = parent.at(key);
  if (!node.is_object()) throw ConfigError(path, "must be an object");
  return node;
}

double read_number(const json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError(path, "must be a number");
  return node.get<double>();
}

double required_number(const json& object, const char* key, const std::string& path) {
  if (!object.contains(key)) throw ConfigError(path + "." + key, "missing required field");
  return read_number(object.at(key), path + "." + key);
}

void optional_number(const json& object, const char* key, const std::string& path, double& out) {
  if (object.contains(key)) out = read_number(object.at(key), path + "." + key);
}

void positive(double value, const std::string& field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(field, fmt::format("must be finite and > 0 (got {})", value));
  }
}

Setup parse_setup(ExperimentKind kind, const json& node, std::vector<std::string>& warnings) {
  const std::string path = "setup";
  switch (kind) {
    case ExperimentKind::electric: {
      reject_unknown(node, path, {"Q", "M", "v", "r", "T", "tau"});
      ElectricSetup s{
          .Q = required_number(node, "Q", path),
          .M = required_number(node, "M", path),
          .v = required_number(node, "v", path),
          .r = required_number(node, "r", path),
          .T = required_number(node, "T", path),
          .tau = required_number(node, "tau", path),
      };
      s.validate();
      return s;
    }
    case ExperimentKind::magnetic: {
      reject_unknown(node, path, {"Q", "M", "v", "r", "R", "L", "u"});
      MagneticSetup s{
          .Q = required_number(node, "Q", path),
          .M = required_number(node, "M", path),
          .v = required_number(node, "v", path),
          .r = required_number(node, "r", path),
          .R = required_number(node, "R", path),
          .L = required_number(node, "L", path),
          .u = required_number(node, "u", path),
      };
      auto w = s.validate();
      warnings.insert(warnings.end(), w.begin(), w.end());
      return s;
    }
    case ExperimentKind::null_check: {
      reject_unknown(node, path, {"Q", "r"});
      NullCheckSetup s{.Q = required_number(node, "Q", path), .r = required_number(node, "r", path)};
      s.validate();
      return s;
    }
  }
  throw ConfigError("experiment", "unsupported experiment");
}

GridSpec parse_grid(const json& node) {
  reject_unknown(node, "grid", {"points", "extent"});
  GridSpec grid;
  if (node.contains("points")) {
    const json& p = node.at("points");
    if (p.is_string() && p.get<std::string>() == "auto") {
      grid.points = 0;
    } else if (p.is_number_integer() && p.get<long long>() > 0) {
      grid.points = p.get<std::size_t>();
      if (!std::has_single_bit(grid.points)) {
        throw ConfigError("grid.points", fmt::format("must be a power of two (got {})", grid.points));
      }
      if (grid.points < 64) throw ConfigError("grid.points", "must be >= 64");
    } else {
      throw ConfigError("grid.points", "must be a positive integer or \"auto\"");
    }
  }
  if (node.contains("extent")) {
    const json& e = node.at("extent");
    if (e.is_string() && e.get<std::string>() == "auto") {
      grid.x_min.reset();
      grid.x_max.reset();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      grid.x_min = e[0].get<double>();
      grid.x_max = e[1].get<double>();
      if (!(*grid.x_max > *grid.x_min)) throw ConfigError("grid.extent", "requires x_min < x_max");
    } else {
      throw ConfigError("grid.extent", "must be \"auto\" or [x_min, x_max]");
    }
  }
  return grid;
}

ScheduleSpec parse_schedule(const json& node) {
  reject_unknown(node, "schedule", {"sample_every", "approach_margin", "t_final", "pre_drift", "post_drift"});
  ScheduleSpec s;
  if (node.contains("sample_every")) {
    const json& n = node.at("sample_every");
    if (!n.is_number_integer() || n.get<long long>() < 1) {
      throw ConfigError("schedule.sample_every", "must be an integer >= 1");
    }
    s.sample_every = n.get<std::size_t>();
  }
  optional_number(node, "approach_margin", "schedule", s.approach_margin);
  if (node.contains("t_final")) {
    const json& t = node.at("t_final");
    if (!(t.is_string() && t.get<std::string>() == "auto")) {
      s.t_final = read_number(t, "schedule.t_final");
      positive(*s.t_final, "schedule.t_final");
    }
  }
  optional_number(node, "pre_drift", "schedule", s.pre_drift);
  optional_number(node, "post_drift", "schedule", s.post_drift);
  if (!(s.approach_margin >= 4.0)) throw ConfigError("schedule.approach_margin", "must be >= 4 (sigma0 units)");
  if (!(s.pre_drift >= 0.0)) throw ConfigError("schedule.pre_drift", "must be >= 0");
  if (!(s.post_drift >= 0.0)) throw ConfigError("schedule.post_drift", "must be >= 0");
  return s;
}

MirrorConfig parse_mirror(const json& node) {
  reject_unknown(node, "mirror", {"V", "d", "w", "wall_scale"});
  MirrorConfig m;
  optional_number(node, "V", "mirror", m.V);
  if (node.contains("d")) m.d = read_number(node.at("d"), "mirror.d");
  optional_number(node, "w", "mirror", m.w);
  optional_number(node, "wall_scale", "mirror", m.wall_scale);
  positive(m.V, "mirror.V");
  positive(m.w, "mirror.w");
  positive(m.wall_scale, "mirror.wall_scale");
  if (m.d) {
    MirrorSpec{.V = m.V, .d = *m.d, .w = m.w, .wall_scale = m.wall_scale}.validate();
  }
  return m;
}

Tolerances parse_tolerances(const json& node) {
  reject_unknown(node, "tolerances",
                 {"phase", "shift", "visibility", "norm", "boundary_probability", "boundary_band", "quadrature",
                  "dark_visibility"});
  Tolerances t;
  optional_number(node, "phase", "tolerances", t.phase);
  optional_number(node, "shift", "tolerances", t.shift);
  optional_number(node, "visibility", "tolerances", t.visibility);
  optional_number(node, "norm", "tolerances", t.norm);
  optional_number(node, "boundary_probability", "tolerances", t.boundary_probability);
  optional_number(node, "boundary_band", "tolerances", t.boundary_band);
  optional_number(node, "quadrature", "tolerances", t.quadrature);
  optional_number(node, "dark_visibility", "tolerances", t.dark_visibility);
  positive(t.phase, "tolerances.phase");
  positive(t.shift, "tolerances.shift");
  positive(t.visibility, "tolerances.visibility");
  positive(t.norm, "tolerances.norm");
  positive(t.boundary_probability, "tolerances.boundary_probability");
  positive(t.boundary_band, "tolerances.boundary_band");
  positive(t.quadrature, "tolerances.quadrature");
  if (t.quadrature > 1e-3) throw ConfigError("tolerances.quadrature", "must be in (0, 1e-3]");
  if (!(t.dark_visibility > 0.0 && t.dark_visibility < 1.0)) {
    throw ConfigError("tolerances.dark_visibility", "must be in (0, 1)");
  }
  return t;
}

}  // namespace

SimulationConfig load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("parse error: {}", e.what()));
  }
  if (!doc.is_object()) throw ConfigError("", "top-level document must be an object");
  reject_unknown(doc, "", {"experiment", "setup", "grid", "dt", "sigma0", "schedule", "mirror", "tolerances"});

  SimulationConfig config;
  if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
    throw ConfigError("experiment", "missing or not a string");
  }
  const auto kind = doc.at("experiment").get<std::string>();
  if (kind == "electric") {
    config.experiment = ExperimentKind::electric;
  } else if (kind == "magnetic") {
    config.experiment = ExperimentKind::magnetic;
    config.sigma0 = 100.0;
  } else if (kind == "null_check") {
    config.experiment = ExperimentKind::null_check;
  } else {
    throw ConfigError("experiment", fmt::format("must be electric, magnetic or null_check (got \"{}\")", kind));
  }

  config.setup = parse_setup(config.experiment, require_object(doc, "setup", "setup"), config.warnings);
  if (doc.contains("grid")) config.grid = parse_grid(require_object(doc, "grid", "grid"));
  if (doc.contains("dt")) {
    config.dt = read_number(doc.at("dt"), "dt");
    positive(config.dt, "dt");
  }
  if (doc.contains("sigma0")) {
    config.sigma0 = read_number(doc.at("sigma0"), "sigma0");
    positive(config.sigma0, "sigma0");
  } else if (config.experiment == ExperimentKind::magnetic) {
    config.sigma0 = 100.0;
  }
  if (doc.contains("schedule")) config.schedule = parse_schedule(require_object(doc, "schedule", "schedule"));
  if (doc.contains("mirror")) config.mirror = parse_mirror(require_object(doc, "mirror", "mirror"));
  if (doc.contains("tolerances")) {
    config.tolerances = parse_tolerances(require_object(doc, "tolerances", "tolerances"));
  }

  if (config.experiment == ExperimentKind::electric && config.mirror.d) {
    throw ConfigError("mirror.d", "derived from setup.T and setup.v for electric experiments; remove it");
  }
  if (!config.grid.auto_extent() && !config.grid.auto_points()) {
    const double dx = (*config.grid.x_max - *config.grid.x_min) / static_cast<double>(config.grid.points);
    if (config.sigma0 < 4.0 * dx) {
      throw ConfigError("sigma0", fmt::format("must be >= 4 dx = {} for grid resolution", 4.0 * dx));
    }
  }
  return config;
}

SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot open config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

json to_json(const SimulationConfig& c) {
  json doc;
  doc["experiment"] = std::string(to_string(c.experiment));
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ElectricSetup>) {
          doc["setup"] = {{"Q", s.Q}, {"M", s.M}, {"v", s.v}, {"r", s.r}, {"T", s.T}, {"tau", s.tau}};
        } else if constexpr (std::is_same_v<S, MagneticSetup>) {
          doc["setup"] = {{"Q", s.Q}, {"M", s.M}, {"v", s.v}, {"r", s.r}, {"R", s.R}, {"L", s.L}, {"u", s.u}};
        } else {
          doc["setup"] = {{"Q", s.Q}, {"r", s.r}};
        }
      },
      c.setup);
  json grid;
  grid["points"] = c.grid.auto_points() ? json("auto") : json(c.grid.points);
  grid["extent"] = c.grid.auto_extent() ? json("auto") : json::array({*c.grid.x_min, *c.grid.x_max});
  doc["grid"] = grid;
  doc["dt"] = c.dt;
  doc["sigma0"] = c.sigma0;
  doc["schedule"] = {{"sample_every", c.schedule.sample_every},
                     {"approach_margin", c.schedule.approach_margin},
                     {"t_final", c.schedule.t_final ? json(*c.schedule.t_final) : json("auto")},
                     {"pre_drift", c.schedule.pre_drift},
                     {"post_drift", c.schedule.post_drift}};
  json mirror = {{"V", c.mirror.V}, {"w", c.mirror.w}, {"wall_scale", c.mirror.wall_scale}};
  if (c.mirror.d) mirror["d"] = *c.mirror.d;
  doc["mirror"] = mirror;
  doc["tolerances"] = {{"phase", c.tolerances.phase},
                       {"shift", c.tolerances.shift},
                       {"visibility", c.tolerances.visibility},
                       {"norm", c.tolerances.norm},
                       {"boundary_probability", c.tolerances.boundary_probability},
                       {"boundary_band", c.tolerances.boundary_band},
                       {"quadrature", c.tolerances.quadrature},
                       {"dark_visibility", c.tolerances.dark_visibility}};
  return doc;
}

}  // namespace abfield
