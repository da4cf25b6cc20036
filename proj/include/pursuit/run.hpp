#pragma once

#include <string>
#include <vector>

#include "pursuit/config.hpp"
#include "pursuit/full_space.hpp"

namespace pursuit {

struct RunResult {
  std::vector<std::string> artifacts;  // file names relative to the output directory
};

// Execute one mode and write its artifacts plus manifest.txt into config.out_dir.
RunResult run(const RunConfig& config);

WorldState initial_world(const RunConfig& config);

// Circling check over the trailing `window` time units: pooled agent-beacon
// ranges share a mean (relative spread = std / mean) and every beacon bearing
// sits at +pi/2 or at -pi/2 (one sign for all agents).
struct CirclingSummary {
  double rho_b_mean = 0.0;
  double rel_spread = 0.0;
  double kappa_b_error = 0.0;
  int direction = 0;  // +1 counter-clockwise, -1 clockwise
  bool converged = false;
};

CirclingSummary circling_summary(const Trajectory& traj, double window, double spread_tol = 1e-3,
                                 double kappa_tol = 1e-2);

// Pure-shape preservation along a full-space run: largest drift of rho_i/rho_1
// and rho_ib/rho_1 from their initial values, and whether rho_1 increases at
// every recorded sample after `transient`.
struct SpiralSummary {
  double ratio_drift = 0.0;
  bool rho1_increasing = false;
  double rho1_start = 0.0;
  double rho1_end = 0.0;
  double kappa1_end = 0.0;
};

SpiralSummary spiral_summary(const Trajectory& traj, double transient = 0.0);

// Full-space simulate -> extract versus direct shape-space integration.
struct TwoRouteSummary {
  double max_deviation = 0.0;  // largest per-variable difference over the recorded samples
  double max_residual = 0.0;   // constraint residual along the shape-space run
};

TwoRouteSummary two_route(const WorldState& world0, const ControlParams& params, double duration, double dt,
                          int record_every = 100);

}  // namespace pursuit
