#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pursuit/pure_shape.hpp"
#include "pursuit/types.hpp"

namespace pursuit {

enum class RunMode { Simulate, ShapeSim, Equilibria, Stability, PureShape, Portrait, Sweep };

const char* to_string(RunMode m);
std::optional<RunMode> parse_mode(const std::string& name);

enum class InitialKind { Random, Equilibrium, Lift };

struct RunConfig {
  RunMode mode = RunMode::Simulate;
  int n = 0;
  ControlParams params;
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  double duration = 10.0;
  double dt = 1e-3;
  int record_every = 1;

  // Initial state for simulate / shape-sim.
  InitialKind initial = InitialKind::Random;
  double half_width = 2.0;
  Vec2 beacon;

  std::optional<int> m;
  std::optional<int> k;
  double kappa1 = 0.0;
  double rho1 = 1.0;
  std::string direction = "both";  // both | ccw | cw

  // Trailing window (time units) for the convergence summary of simulate runs.
  double window = 10.0;

  PortraitGrid grid;
  std::vector<std::pair<double, double>> portrait_seeds;

  std::string sweep_parameter;
  double sweep_from = 0.0;
  double sweep_to = 0.0;
  int sweep_samples = 0;
  int workers = 4;

  // Canonical "section.key = value" lines after overrides, sorted; hashed for provenance.
  std::map<std::string, std::string> entries;
  std::uint64_t hash() const;
};

// "11/12pi", "-pi/4", "pi", "0.5pi" or a plain number (radians).
double parse_angle(const std::string& text, const std::string& key);

// Parse "key = value" text with optional [section] headers. `mode` is the
// requested run mode; a `mode` entry in the text must agree with it.
// Overrides are "section.key=value" strings applied after the text.
RunConfig parse_config_text(const std::string& text, RunMode mode,
                            const std::vector<std::string>& overrides = {});
RunConfig parse_config_file(const std::string& path, RunMode mode,
                            const std::vector<std::string>& overrides = {});

}  // namespace pursuit
