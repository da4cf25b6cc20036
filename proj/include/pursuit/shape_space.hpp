#pragma once

#include <iosfwd>
#include <vector>

#include "pursuit/types.hpp"

namespace pursuit {

// Residuals of the cycle-closure constraint (g0, wrapped mod 2pi) and the
// per-pair consistency constraints (g1 real part, g2 imaginary part).
struct ConstraintResiduals {
  double g0 = 0.0;
  std::vector<double> g1;
  std::vector<double> g2;

  double max_abs() const;
};

ConstraintResiduals constraint_residuals(const ShapeState& shape);

// Closed-loop shape dynamics under equal speeds, common gains and a common
// beacon offset. Result is in the same layout as the input.
ShapeState shape_derivative(const ShapeState& shape, const ControlParams& params);

struct ShapeIntegrationOptions {
  double duration = 10.0;
  double dt = 1e-3;
  int record_every = 1;
  double residual_limit = 1e-4;  // drift above this aborts the run
};

struct ShapeSample {
  double t = 0.0;
  ShapeState shape;
  ConstraintResiduals residuals;
};

struct ShapeTrajectory {
  std::vector<ShapeSample> samples;
  double max_residual = 0.0;  // over every step, not only recorded samples
};

// RK4 on the shape dynamics with angles rewrapped after each step.
// Throws NumericError on constraint drift above the limit and
// CollisionError if a distance falls below the collocation floor.
ShapeTrajectory integrate_shape(const ShapeState& shape0, const ControlParams& params,
                                const ShapeIntegrationOptions& options);

// Shape trajectory CSV: t, per-agent (rho, kappa, theta, rho_b, kappa_b), g0, max|g1|, max|g2|.
void write_shape_csv(std::ostream& os, const ShapeTrajectory& traj,
                     const std::vector<std::string>& header_comments = {});

}  // namespace pursuit
