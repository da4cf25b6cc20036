#include "pursuit/shape_space.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "format.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/numerics.hpp"

namespace pursuit {

double ConstraintResiduals::max_abs() const {
  double m = std::abs(g0);
  for (double v : g1) m = std::max(m, std::abs(v));
  for (double v : g2) m = std::max(m, std::abs(v));
  return m;
}

ConstraintResiduals constraint_residuals(const ShapeState& s) {
  const int n = s.n();
  ConstraintResiduals r;
  r.g1.resize(n);
  r.g2.resize(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    sum += wrap_angle(kPi + s.kappa[i] - s.theta[next]);
    r.g1[i] = s.rho[i] - s.rho_b[i] * std::cos(s.kappa_b[i] - s.kappa[i]) -
              s.rho_b[next] * std::cos(s.kappa_b[next] - s.theta[next]);
    r.g2[i] = s.rho_b[i] * std::sin(s.kappa_b[i] - s.kappa[i]) +
              s.rho_b[next] * std::sin(s.kappa_b[next] - s.theta[next]);
  }
  r.g0 = wrap_angle(sum);
  return r;
}

ShapeState shape_derivative(const ShapeState& s, const ControlParams& p) {
  require_assumptions(p, true, true, true, false, "shape_derivative");
  const int n = s.n();
  if (n != p.n()) throw PreconditionError("shape_derivative: agent count does not match params");

  const double mu = p.mu.front();
  const double lam = p.lambda;
  const double a0 = p.alpha0.front();
  const double speed = p.nu.front();

  // gamma_i = (sin kappa_i + sin theta_{i+1}) / rho_i: rotation rate of the line of sight.
  std::vector<double> gamma(n);
  for (int i = 0; i < n; ++i) {
    if (!(s.rho[i] > kCollocationFloor) || !(s.rho_b[i] > kCollocationFloor))
      throw CollisionError(0.0, i, s.rho[i] > kCollocationFloor ? -1 : (i + 1) % n,
                           "shape_derivative: collocated agent " + std::to_string(i + 1));
    gamma[i] = (std::sin(s.kappa[i]) + std::sin(s.theta[(i + 1) % n])) / s.rho[i];
  }

  ShapeState d = ShapeState::zeros(n);
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    const int prev = (i + n - 1) % n;
    const double kdot = -mu * ((1.0 - lam) * std::sin(s.kappa[i] - p.alpha[i]) +
                               lam * std::sin(s.kappa_b[i] - a0)) +
                        lam * gamma[i];
    d.rho[i] = -(std::cos(s.kappa[i]) + std::cos(s.theta[next]));
    d.kappa[i] = kdot;
    d.theta[i] = kdot - gamma[i] + gamma[prev];
    d.rho_b[i] = -std::cos(s.kappa_b[i]);
    d.kappa_b[i] = kdot - gamma[i] + std::sin(s.kappa_b[i]) / s.rho_b[i];
  }
  if (speed != 1.0) {
    for (auto* v : {&d.rho, &d.kappa, &d.theta, &d.rho_b, &d.kappa_b})
      for (double& x : *v) x *= speed;
  }
  return d;
}

ShapeTrajectory integrate_shape(const ShapeState& shape0, const ControlParams& params,
                                const ShapeIntegrationOptions& opt) {
  require_assumptions(params, true, true, true, false, "integrate_shape");
  if (!(opt.duration > 0.0) || !(opt.dt > 0.0))
    throw PreconditionError("integrate_shape: duration and dt must be positive");

  const int n = shape0.n();
  Field field = [&](std::span<const double> v, std::span<double> out) {
    const auto d = shape_derivative(ShapeState::from_vector(v), params).to_vector();
    std::copy(d.begin(), d.end(), out.begin());
  };

  ShapeTrajectory traj;
  auto record = [&](double t, const ShapeState& s, const ConstraintResiduals& r) {
    traj.samples.push_back({t, s, r});
  };
  ConstraintResiduals r0 = constraint_residuals(shape0);
  traj.max_residual = r0.max_abs();
  record(0.0, shape0, r0);

  std::vector<double> state = shape0.to_vector();
  Rk4Stepper stepper(state.size());
  const int stride = std::max(1, opt.record_every);
  const auto steps = static_cast<long long>(std::llround(opt.duration / opt.dt));
  for (long long k = 1; k <= steps; ++k) {
    stepper.step(field, state, opt.dt);
    const double t = static_cast<double>(k) * opt.dt;
    for (int i = 0; i < n; ++i) {
      for (int c : {1, 2, 4}) state[5 * i + c] = wrap_angle(state[5 * i + c]);
      for (int c : {0, 3}) {
        if (!(state[5 * i + c] > kCollocationFloor))
          throw CollisionError(t, i, c == 0 ? (i + 1) % n : -1,
                               "integrate_shape: distance floor breached at t=" + detail::num(t) +
                                   " (agent " + std::to_string(i + 1) + ")");
      }
    }
    const ShapeState s = ShapeState::from_vector(state);
    const ConstraintResiduals r = constraint_residuals(s);
    const double m = r.max_abs();
    if (!std::isfinite(m) || m > opt.residual_limit)
      throw NumericError("integrate_shape: constraint drift " + detail::num(m) + " at t=" +
                         detail::num(t));
    traj.max_residual = std::max(traj.max_residual, m);
    if (k % stride == 0 || k == steps) record(t, s, r);
  }
  return traj;
}

void write_shape_csv(std::ostream& os, const ShapeTrajectory& traj,
                     const std::vector<std::string>& header_comments) {
  for (const auto& c : header_comments) os << "# " << c << '\n';
  os << "# units: rho in length units, angles in radians wrapped to (-pi, pi]\n";
  if (traj.samples.empty()) return;
  const int n = traj.samples.front().shape.n();
  os << "t";
  for (int i = 1; i <= n; ++i)
    os << ",rho" << i << ",kappa" << i << ",theta" << i << ",rho" << i << "b,kappa" << i << "b";
  os << ",g0,max_abs_g1,max_abs_g2\n";
  for (const auto& smp : traj.samples) {
    os << detail::num(smp.t);
    for (double v : smp.shape.to_vector()) os << ',' << detail::num(v);
    double m1 = 0.0, m2 = 0.0;
    for (double v : smp.residuals.g1) m1 = std::max(m1, std::abs(v));
    for (double v : smp.residuals.g2) m2 = std::max(m2, std::abs(v));
    os << ',' << detail::num(smp.residuals.g0) << ',' << detail::num(m1) << ',' << detail::num(m2)
       << '\n';
  }
}

}  // namespace pursuit
