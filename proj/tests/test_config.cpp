#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pursuit/config.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/numerics.hpp"
#include "pursuit/run.hpp"

using namespace pursuit;
namespace fs = std::filesystem;

namespace {

std::string cfg(const char* name) { return std::string(PURSUIT_CONFIG_DIR) + "/" + name; }

const char* kReference = R"(
[run]
n = 3
[params]
lambda = 0.5
mu = 1
alpha = pi/6
alpha0 = pi/4
[equilibrium]
m = 1
)";

std::string config_error_key(const std::string& text, RunMode mode, std::vector<std::string> ov = {}) {
  try {
    parse_config_text(text, mode, ov);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pursuit_config_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, Fig2FileParses) {
  const RunConfig c = parse_config_file(cfg("fig2.cfg"), RunMode::Simulate);
  EXPECT_EQ(c.n, 10);
  EXPECT_DOUBLE_EQ(c.params.lambda, 0.5);
  for (double mu : c.params.mu) EXPECT_DOUBLE_EQ(mu, 1.0);
  EXPECT_DOUBLE_EQ(c.params.alpha[0], kPi / 6);
  EXPECT_DOUBLE_EQ(c.params.alpha[5], kPi / 7);
  EXPECT_DOUBLE_EQ(c.params.alpha[9], kPi / 8);
  EXPECT_DOUBLE_EQ(c.params.alpha0[3], kPi / 4);
}

TEST(Config, ShippedConfigsParseForTheirModes) {
  EXPECT_NO_THROW(parse_config_file(cfg("reference.cfg"), RunMode::Equilibria));
  EXPECT_NO_THROW(parse_config_file(cfg("reference.cfg"), RunMode::Stability));
  EXPECT_NO_THROW(parse_config_file(cfg("reference.cfg"), RunMode::ShapeSim));
  EXPECT_NO_THROW(parse_config_file(cfg("fig4.cfg"), RunMode::Simulate));
  EXPECT_NO_THROW(parse_config_file(cfg("fig5.cfg"), RunMode::Portrait));
  EXPECT_NO_THROW(parse_config_file(cfg("pure_shape.cfg"), RunMode::PureShape));
  EXPECT_NO_THROW(parse_config_file(cfg("sweep.cfg"), RunMode::Sweep));
  EXPECT_NO_THROW(parse_config_file(cfg("sweep_mu.cfg"), RunMode::Sweep));
}

TEST(Config, LambdaOutsideOpenIntervalRejected) {
  EXPECT_EQ(config_error_key(kReference, RunMode::Equilibria, {"params.lambda=1.0"}), "params.lambda");
  EXPECT_EQ(config_error_key(kReference, RunMode::Equilibria, {"params.lambda=0"}), "params.lambda");
}

TEST(Config, MissingManifoldIndexNamesKey) {
  EXPECT_EQ(config_error_key(kReference, RunMode::PureShape), "manifold.k");
  EXPECT_EQ(config_error_key(kReference, RunMode::Portrait), "manifold.k");
}

TEST(Config, MissingBranchIndexForStability) {
  EXPECT_EQ(config_error_key("n = 3\nlambda = 0.5\nalpha = pi/6\nalpha0 = pi/4\n", RunMode::Stability),
            "equilibrium.m");
}

TEST(Config, UnknownAndDuplicateKeys) {
  EXPECT_EQ(config_error_key(std::string(kReference) + "[params]\ngain = 3\n", RunMode::Equilibria), "params.gain");
  EXPECT_EQ(config_error_key(std::string(kReference) + "[params]\nmu = 2\n", RunMode::Equilibria), "params.mu");
}

TEST(Config, AssumptionViolationsNameKey) {
  // Mixed beacon offsets break the common-offset assumption needed by the shape modes.
  EXPECT_EQ(config_error_key(kReference, RunMode::Stability, {"params.alpha0=pi/4, pi/3, pi/4"}), "params.alpha0");
  EXPECT_EQ(config_error_key(kReference, RunMode::Stability, {"params.alpha=pi/6, pi/5, pi/6"}), "params.alpha");
  EXPECT_EQ(config_error_key(kReference, RunMode::ShapeSim, {"params.nu=1, 2, 1"}), "params.nu");
  // Full-space simulation accepts heterogeneous offsets.
  EXPECT_EQ(config_error_key(kReference, RunMode::Simulate, {"params.alpha=pi/6, pi/5, pi/6"}), "<accepted>");
}

TEST(Config, PerAgentListLengthChecked) {
  EXPECT_EQ(config_error_key(kReference, RunMode::Simulate, {"params.alpha=pi/6, pi/5"}), "params.alpha");
}

TEST(Config, ModeEntryMustAgree) {
  EXPECT_EQ(config_error_key(std::string("mode = portrait\n") + kReference, RunMode::Equilibria), "run.mode");
}

TEST(Config, AngleNotation) {
  EXPECT_DOUBLE_EQ(parse_angle("11/12pi", "x"), 11.0 * kPi / 12.0);
  EXPECT_DOUBLE_EQ(parse_angle("-pi/4", "x"), -kPi / 4.0);
  EXPECT_DOUBLE_EQ(parse_angle("pi", "x"), kPi);
  EXPECT_DOUBLE_EQ(parse_angle("0.5pi", "x"), kPi / 2.0);
  EXPECT_DOUBLE_EQ(parse_angle("1.25", "x"), 1.25);
  EXPECT_THROW(parse_angle("1/0pi", "x"), ConfigError);
  EXPECT_THROW(parse_angle("quarter", "x"), ConfigError);
}

TEST(Config, OverridesApplyAfterFile) {
  const RunConfig c = parse_config_text(kReference, RunMode::Equilibria, {"params.mu=3", "run.seed=9"});
  EXPECT_DOUBLE_EQ(c.params.mu[1], 3.0);
  EXPECT_DOUBLE_EQ(c.params.mu_b[1], 3.0);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(config_error_key(kReference, RunMode::Equilibria, {"lambda"}), "lambda");
}

TEST(Config, HashIgnoresOutputDirectoryButNotSeed) {
  const auto a = parse_config_text(kReference, RunMode::Equilibria, {"run.out=/tmp/a"});
  const auto b = parse_config_text(kReference, RunMode::Equilibria, {"run.out=/tmp/b"});
  const auto c = parse_config_text(kReference, RunMode::Equilibria, {"run.seed=2"});
  const auto d = parse_config_text(kReference, RunMode::Stability);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_NE(a.hash(), d.hash());
}

TEST(Run, EquilibriaReportContainsReferenceCircle) {
  const fs::path out = scratch("equilibria");
  const auto c = parse_config_text(kReference, RunMode::Equilibria, {"run.out=" + out.string()});
  const RunResult r = run(c);
  ASSERT_EQ(r.artifacts.back(), "manifest.txt");
  const std::string report = slurp(out / "equilibria.txt");
  EXPECT_NE(report.find("1.047197551 rad (0.3333333333 pi); 1.047197551 rad"), std::string::npos);
  EXPECT_NE(report.find("rho_b = 0.828427124746"), std::string::npos);
}

TEST(Run, StabilityWritesVerdictAndSpectrum) {
  const fs::path out = scratch("stability");
  run(parse_config_text(kReference, RunMode::Stability, {"run.out=" + out.string()}));
  const std::string report = slurp(out / "stability.txt");
  EXPECT_NE(report.find("[mode 2]"), std::string::npos);
  EXPECT_NE(report.find("necessary_conditions = pass"), std::string::npos);
  std::ifstream csv(out / "spectrum.csv");
  int lines = 0;
  for (std::string l; std::getline(csv, l);) lines += !l.empty() && l[0] != '#';
  EXPECT_EQ(lines, 1 + 15);
}

TEST(Run, SweepHasOneRowPerSample) {
  const fs::path out = scratch("sweep");
  run(parse_config_file(cfg("sweep.cfg"), RunMode::Sweep, {"run.out=" + out.string()}));
  std::ifstream csv(out / "sweep.csv");
  int rows = 0;
  for (std::string l; std::getline(csv, l);) rows += !l.empty() && l[0] != '#';
  EXPECT_EQ(rows, 1 + 64);
}

TEST(Run, SweepIndependentOfWorkerCount) {
  const fs::path a = scratch("sweep_w1"), b = scratch("sweep_w7");
  run(parse_config_file(cfg("sweep.cfg"), RunMode::Sweep, {"run.out=" + a.string(), "sweep.workers=1"}));
  run(parse_config_file(cfg("sweep.cfg"), RunMode::Sweep, {"run.out=" + b.string(), "sweep.workers=7"}));
  // Worker count is part of the hashed configuration, so compare data rows only.
  const auto rows = [](const fs::path& p) {
    std::string s = slurp(p / "sweep.csv");
    return s.substr(s.find("index,"));
  };
  EXPECT_EQ(rows(a), rows(b));
}

TEST(Run, ByteIdenticalOutputsForSameSeed) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::vector<std::string> common{"integration.T=2", "integration.record_every=50"};
  auto ov_a = common, ov_b = common;
  ov_a.push_back("run.out=" + a.string());
  ov_b.push_back("run.out=" + b.string());
  const auto ra = run(parse_config_file(cfg("reference.cfg"), RunMode::ShapeSim, ov_a));
  run(parse_config_file(cfg("reference.cfg"), RunMode::ShapeSim, ov_b));
  for (const auto& name : ra.artifacts) EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

TEST(Run, ManifestListsProvenance) {
  const fs::path out = scratch("manifest");
  const auto c = parse_config_file(cfg("reference.cfg"), RunMode::Simulate,
                                   {"run.out=" + out.string(), "run.seed=42", "integration.T=1"});
  run(c);
  const std::string m = slurp(out / "manifest.txt");
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.hash()));
  EXPECT_NE(m.find("mode = simulate"), std::string::npos);
  EXPECT_NE(m.find(std::string("config_hash = ") + hash), std::string::npos);
  EXPECT_NE(m.find("seed = 42"), std::string::npos);
  EXPECT_NE(m.find("artifact = trajectory.csv"), std::string::npos);
  EXPECT_NE(m.find("artifact = summary.txt"), std::string::npos);
}

TEST(Run, EquilibriumInitialStaysPut) {
  const fs::path out = scratch("eq_initial");
  const auto c = parse_config_file(cfg("reference.cfg"), RunMode::Simulate,
                                   {"run.out=" + out.string(), "initial.kind=equilibrium", "integration.T=10"});
  run(c);
  const std::string s = slurp(out / "summary.txt");
  EXPECT_NE(s.find("circling_converged = true"), std::string::npos);
}

TEST(Run, UnwritableOutputIsConfigError) {
  const fs::path file = scratch("not_a_dir");
  std::ofstream(file) << "x";
  try {
    run(parse_config_text(kReference, RunMode::Equilibria, {"run.out=" + (file / "sub").string()}));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "run.out");
  }
}
