#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "abfield/commands.hpp"
#include "abfield/io.hpp"

using namespace abfield;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(ABFIELD_CONFIG_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("abfield_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

struct Captured {
  int code;
  std::string out;
  std::string err;
};

template <typename F>
Captured capture(const std::string& config, const fs::path& out_dir, F&& command) {
  std::ostringstream out, err;
  CommandContext ctx{config, out_dir, "test", &out, &err};
  const int code = command(ctx);
  return {code, out.str(), err.str()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ABFIELD_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST(Io, ConsistencyReportKeysExactly) {
  ConsistencyReport r;
  r.phi_ab = 1.5;
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  const std::vector<std::string> expected = {"delta_v", "delta_x", "flux", "lambda", "phi_ab", "phi_from_shift",
                                             "relative_residual"};
  EXPECT_EQ(keys, expected);
  EXPECT_TRUE(j.at("flux").is_null());
  r.flux = 2.0;
  EXPECT_EQ(to_json(r).at("flux").get<double>(), 2.0);
}

TEST(Io, FormatNumberRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Io, SeriesCsvColumns) {
  BranchResult r;
  r.times = {0.0, 1.0};
  r.overlap = {Complex(1.0, 0.0), Complex(0.5, 0.5)};
  r.visibility = {1.0, std::abs(Complex(0.5, 0.5))};
  r.rel_phase = {0.0, 0.78};
  r.entropy = {0.0, 0.1};
  r.moments_L = {Moments{.mean_x = 1.0, .mean_p = 2.0}, Moments{.mean_x = 3.0, .mean_p = 4.0}};
  r.moments_R = r.moments_L;
  std::ostringstream out;
  write_series_csv(out, r);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,re_overlap,im_overlap,visibility,rel_phase,entropy,mean_x_L,mean_x_R,mean_p_L,mean_p_R");
  EXPECT_EQ(count_lines(out.str()), 3u);
}

TEST(Io, ConfigDigestIsStable) {
  const auto a = load_config_file(config_path("electric.json"));
  const auto b = load_config(to_json(a).dump(4));
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).size(), 64u);
  EXPECT_NE(config_digest(a), config_digest(load_config_file(config_path("magnetic.json"))));
}

TEST(Commands, AnalyticPrintsReport) {
  TempDir dir;
  const auto c = capture(config_path("electric.json"), dir.path(),
                         [](const CommandContext& ctx) { return cmd_analytic(ctx); });
  ASSERT_EQ(c.code, kExitOk) << c.err;
  const auto j = nlohmann::json::parse(c.out);
  EXPECT_LE(j.at("relative_residual").get<double>(), 1e-12);
  EXPECT_TRUE(j.at("flux").is_null());
  EXPECT_TRUE(fs::exists(dir.path() / "run.json"));
  const auto record = nlohmann::json::parse(slurp(dir.path() / "run.json"));
  EXPECT_EQ(record.at("schema_version"), "1");
  EXPECT_EQ(record.at("config_digest").get<std::string>().size(), 64u);
}

TEST(Commands, AnalyticWithZeroCharge) {
  TempDir dir;
  const fs::path cfg = dir.path() / "q0.json";
  auto doc = nlohmann::json::parse(slurp(config_path("electric.json")));
  doc["setup"]["Q"] = 0.0;
  std::ofstream(cfg) << doc.dump();
  const auto c = capture(cfg.string(), dir.path(), [](const CommandContext& ctx) { return cmd_analytic(ctx); });
  ASSERT_EQ(c.code, kExitOk);
  EXPECT_EQ(nlohmann::json::parse(c.out).at("phi_ab").get<double>(), 0.0);
}

TEST(Commands, KindMismatchIsConfigError) {
  TempDir dir;
  const auto c = capture(config_path("electric.json"), dir.path(),
                         [](const CommandContext& ctx) { return cmd_analytic(ctx, ExperimentKind::magnetic); });
  EXPECT_EQ(c.code, kExitConfig);
  EXPECT_EQ(c.err.rfind("error:", 0), 0u);
}

TEST(Commands, MalformedConfigNamesField) {
  TempDir dir;
  const fs::path cfg = dir.path() / "bad.json";
  std::ofstream(cfg) << R"({"experiment": "electric",
    "setup": {"Q": 1, "M": 1, "v": 1, "r": 1, "T": 5, "tau": 1}})";
  const auto c = capture(cfg.string(), dir.path(), [](const CommandContext& ctx) { return cmd_analytic(ctx); });
  EXPECT_EQ(c.code, kExitConfig);
  EXPECT_EQ(c.err.rfind("error:", 0), 0u);
  EXPECT_NE(c.err.find("setup.T"), std::string::npos);
  EXPECT_EQ(count_lines(c.err), 1u);
}

TEST(Commands, NullCheckReport) {
  TempDir dir;
  const auto c = capture(config_path("null_check.json"), dir.path(),
                         [](const CommandContext& ctx) { return cmd_null_check(ctx); });
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_NE(c.out.find("predicted under local-field corollary"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir.path() / "null_check.json"));
  EXPECT_EQ(j.at("predicted_phase").get<double>(), 0.0);
  for (const auto& p : j.at("particles")) EXPECT_LE(p.at("normalized").get<double>(), 1e-12);
}

TEST(Commands, SimulateMagneticIsDeterministic) {
  TempDir a, b;
  const auto run = [](const CommandContext& ctx) { return cmd_simulate(ctx); };
  const auto ca = capture(config_path("magnetic.json"), a.path(), run);
  const auto cb = capture(config_path("magnetic.json"), b.path(), run);
  ASSERT_EQ(ca.code, kExitOk) << ca.err;
  ASSERT_EQ(cb.code, kExitOk) << cb.err;
  EXPECT_EQ(slurp(a.path() / "report.json"), slurp(b.path() / "report.json"));
  EXPECT_EQ(slurp(a.path() / "series.csv"), slurp(b.path() / "series.csv"));
  EXPECT_EQ(nlohmann::json::parse(slurp(a.path() / "report.json")).at("series_path"), "series.csv");

  const auto report = nlohmann::json::parse(slurp(a.path() / "report.json"));
  EXPECT_LE(report.at("phase_error").get<double>(), 0.02);
  const auto cfg = load_config_file(config_path("magnetic.json"));
  const auto plan = plan_magnetic(cfg);
  const std::size_t expected_rows = static_cast<std::size_t>(
      std::floor(plan.t_final / (plan.dt * static_cast<double>(cfg.schedule.sample_every)) + 1e-9)) + 1;
  EXPECT_EQ(count_lines(slurp(a.path() / "series.csv")), expected_rows + 1);
}

TEST(Commands, SweepRowsAndEmptyValues) {
  TempDir dir;
  const auto c = capture(config_path("magnetic.json"), dir.path(), [](const CommandContext& ctx) {
    return cmd_sweep(ctx, "setup.Q", {1.5e8, -1.5e8});
  });
  ASSERT_EQ(c.code, kExitOk) << c.err;
  const std::string csv = slurp(dir.path() / "sweep.csv");
  EXPECT_EQ(count_lines(csv), 3u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "setup.Q,phi_ab,simulated_phase,visibility_sim,visibility_model,phase_error");

  const auto empty = capture(config_path("magnetic.json"), dir.path(),
                             [](const CommandContext& ctx) { return cmd_sweep(ctx, "setup.Q", {}); });
  EXPECT_EQ(empty.code, kExitConfig);
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const std::string out = " --out " + dir.path().string();
  EXPECT_EQ(run_cli("analytic --config " + config_path("electric.json") + out), 0);
  EXPECT_EQ(run_cli("analytic --kind magnetic --config " + config_path("magnetic.json") + out), 0);
  EXPECT_EQ(run_cli("null-check --config " + config_path("null_check.json") + out), 0);
  EXPECT_EQ(run_cli("analytic --config /nonexistent.json" + out), 2);
  EXPECT_EQ(run_cli("sweep --config " + config_path("magnetic.json") + " --param setup.Q --values ''" + out), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("analytic"), 2);
}

TEST(Cli, NumericalFailureExitsThree) {
  TempDir dir;
  const fs::path cfg = dir.path() / "tight.json";
  auto doc = nlohmann::json::parse(slurp(config_path("magnetic.json")));
  doc["grid"]["extent"] = {-300.0, 300.0};
  std::ofstream(cfg) << doc.dump();
  EXPECT_EQ(run_cli("simulate --config " + cfg.string() + " --out " + dir.path().string()), 3);
}
