#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pursuit/full_space.hpp"
#include "pursuit/numerics.hpp"
#include "pursuit/types.hpp"

namespace pursuit {

// Overall heading/scale (kappa1, rho1) plus scale-free relative variables.
// Per agent i: kappa_t = kappa_i - kappa_{i+1}, psi = theta_i - kappa_i,
// phi_b = kappa_ib - kappa_i, rho_t = rho_i / rho_1, rho_tb = rho_ib / rho_1.
struct PureShapeState {
  double kappa1 = 0.0;
  double rho1 = 1.0;
  std::vector<double> kappa_t;
  std::vector<double> psi;
  std::vector<double> phi_b;
  std::vector<double> rho_t;
  std::vector<double> rho_tb;

  int n() const { return static_cast<int>(psi.size()); }
  static PureShapeState zeros(int n);

  // Layout: kappa1, rho1, then (kappa_t, psi, phi_b, rho_t, rho_tb) per agent.
  std::vector<double> to_vector() const;
  static PureShapeState from_vector(std::span<const double> v);
};

PureShapeState to_pure_shape(const ShapeState& shape);

// Inverse change of variables (kappa_i rebuilt as kappa_1 + sum_{j>=i} kappa_t_j).
ShapeState from_pure_shape(const PureShapeState& state);

// Residuals of the transformed constraints: closure of sum(pi - psi_i),
// sum(kappa_t) = 0 mod 2pi, rho_t_1 = 1, and the per-pair consistency (re, im).
struct PureConstraintResiduals {
  double closure = 0.0;
  double kappa_sum = 0.0;
  double rho_t1 = 0.0;
  std::vector<double> consistency_re;
  std::vector<double> consistency_im;
  double max_abs() const;
};

PureConstraintResiduals pure_constraint_residuals(const PureShapeState& state);

// Transformed dynamics (common speed, gains and offsets); same layout as the state.
PureShapeState pure_shape_derivative(const PureShapeState& state, const ControlParams& params);

struct ManifoldSpec {
  int n = 0;
  int k = 0;
  double psi = 0.0;     // (n - 2k) pi / n
  double phi_b = 0.0;   // (n - 2k) pi / (2n)
  double rho_tb = 0.0;  // 1 / (2 sin(k pi / n))
};

ManifoldSpec manifold_spec(int n, int k);

// Largest deviation of the manifold-defining families from their constants.
double manifold_residual(const PureShapeState& state, const ManifoldSpec& spec);

PureShapeState lift(const ManifoldSpec& spec, double kappa1, double rho1);

// Beacon at `beacon`; agent 1 at polar angle 0 on a circle of radius
// rho1 * rho_tb, each successor 2 k pi / n further counter-clockwise.
WorldState lift_world(const ManifoldSpec& spec, double kappa1, double rho1, Vec2 beacon = {});

struct ReducedRate {
  double dkappa1 = 0.0;
  double drho1 = 0.0;      // -cos(kappa1) + cos(kappa1 - 2 k pi / n)
  double drho1_alt = 0.0;  // 2 sin(kappa1 - k pi / n) sin(k pi / n)
};

ReducedRate reduced_derivative(double kappa1, double rho1, const ControlParams& params, int k);

enum class ReducedStability { Stable, Unstable, Marginal };

struct ReducedEquilibriumPoint {
  double kappa1 = 0.0;
  ReducedStability stability = ReducedStability::Marginal;
};

struct ReducedEquilibria {
  double rho1 = 0.0;
  std::vector<ReducedEquilibriumPoint> points;  // kappa1 = k pi / n and k pi / n + pi
  bool from_sign_test = false;                 // balanced-gain sign test, else numeric linearisation
  double sign_product = 0.0;                   // only meaningful with balanced gains
};

std::optional<ReducedEquilibria> reduced_equilibrium(const ControlParams& params, int k);

struct InvariantRegion {
  bool holds = false;
  double value = 0.0;  // (1 - lambda) sin(k pi / n - alpha) + lambda cos(alpha0)
  double kappa_lo = 0.0;
  double kappa_hi = 0.0;
};

InvariantRegion invariant_region_check(const ControlParams& params, int k);
bool in_region(const InvariantRegion& region, double kappa1, double rho1);

struct ReducedParams {
  double gamma_kn = 0.0;
  double alpha0_plus = 0.0;
  double alpha0_minus = 0.0;
};

ReducedParams reduced_params(const ControlParams& params, int k);
bool has_balanced_gains(const ControlParams& params);

struct AsymptotePrediction {
  bool conclusive = false;
  double kappa1 = 0.0;  // wrapped
  double cos_term = 0.0;
};

// Requires balanced gains (lambda = 1/2, mu = 2) and the invariant-region condition (PreconditionError otherwise).
AsymptotePrediction asymptote_prediction(const ControlParams& params, int k);

struct ReducedSample {
  double t = 0.0;
  double kappa1 = 0.0;  // unwrapped
  double rho1 = 0.0;
};

std::vector<ReducedSample> integrate_reduced(double kappa1, double rho1, const ControlParams& params,
                                             int k, double duration, double dt, int record_every = 1);

struct PureShapeSample {
  double t = 0.0;
  PureShapeState state;
};

// RK4 on the transformed dynamics; relative angles rewrapped, kappa1 left unwrapped.
std::vector<PureShapeSample> integrate_pure_shape(const PureShapeState& state0,
                                                  const ControlParams& params, double duration,
                                                  double dt, int record_every = 1);

struct HalfAngleGuard {
  double min_cos_half_phi = 0.0;
  double min_cos_half_psi = 0.0;
  double min_sin_half_phi = 0.0;
  bool flagged = false;  // any of the three within 1e-6 of zero
};

HalfAngleGuard half_angle_guard(const PureShapeState& state);

struct PortraitGrid {
  double kappa_min = -kPi;
  double kappa_max = kPi;
  int kappa_samples = 64;
  double rho_min = 0.1;
  double rho_max = 50.0;
  int rho_samples = 64;
};

struct PortraitSample {
  double kappa1, rho1, dkappa1, drho1;
};

struct PhasePortrait {
  std::vector<PortraitSample> grid;
  std::vector<std::vector<ReducedSample>> trajectories;
};

PhasePortrait phase_portrait(const ControlParams& params, int k, const PortraitGrid& grid,
                             const std::vector<std::pair<double, double>>& seeds, double duration,
                             double dt, int record_every = 1);

void write_portrait_grid_csv(std::ostream& os, const PhasePortrait& portrait);
void write_reduced_trajectory_csv(std::ostream& os, const std::vector<ReducedSample>& traj);

const char* to_string(ReducedStability s);

}  // namespace pursuit
