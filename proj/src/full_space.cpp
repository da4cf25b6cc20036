#include "pursuit/full_space.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "format.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/numerics.hpp"

namespace pursuit {

namespace {

std::string pair_name(int i, int j) {
  return "agent " + std::to_string(i + 1) + " / " +
         (j < 0 ? std::string("beacon") : "agent " + std::to_string(j + 1));
}

[[noreturn]] void collocated(double t, int i, int j, double dist) {
  throw CollisionError(t, i, j,
                       "collocation at t=" + detail::num(t) + ": " + pair_name(i, j) +
                           " (distance " + detail::num(dist) + ")");
}

void pack(const WorldState& w, std::span<double> v) {
  for (int i = 0; i < w.n(); ++i) {
    const auto& a = w.agents[i];
    v[6 * i + 0] = a.r.x;
    v[6 * i + 1] = a.r.y;
    v[6 * i + 2] = a.x.x;
    v[6 * i + 3] = a.x.y;
    v[6 * i + 4] = a.y.x;
    v[6 * i + 5] = a.y.y;
  }
}

void unpack(std::span<const double> v, WorldState& w) {
  for (int i = 0; i < w.n(); ++i) {
    auto& a = w.agents[i];
    a.r = {v[6 * i + 0], v[6 * i + 1]};
    a.x = {v[6 * i + 2], v[6 * i + 3]};
    a.y = {v[6 * i + 4], v[6 * i + 5]};
  }
}

}  // namespace

AgentState AgentState::at(Vec2 position, double heading) {
  AgentState a;
  a.r = position;
  a.x = {std::cos(heading), std::sin(heading)};
  a.y = perp(a.x);
  return a;
}

SteeringTerms steering_terms(int i, const WorldState& world, const ControlParams& params) {
  const int n = world.n();
  const int next = (i + 1) % n;
  const AgentState& me = world.agents[i];
  const AgentState& target = world.agents[next];

  const Vec2 r_rel = me.r - target.r;  // r_{i,i+1}
  const double dist = norm(r_rel);
  if (dist <= kCollocationFloor) collocated(world.t, i, next, dist);
  const Vec2 r_beacon = me.r - world.beacon;  // r_{i,b}
  const double dist_b = norm(r_beacon);
  if (dist_b <= kCollocationFloor) collocated(world.t, i, -1, dist_b);

  const Vec2 e = r_rel * (1.0 / dist);
  const Vec2 e_b = r_beacon * (1.0 / dist_b);
  const Vec2 rel_velocity = params.nu[i] * me.x - params.nu[next] * target.x;

  SteeringTerms s;
  s.u_cb = -params.mu[i] * dot(rotate(me.y, params.alpha[i]), e) -
           dot(e, perp(rel_velocity)) / (params.nu[i] * dist);
  s.u_beacon = -params.mu_b[i] * dot(rotate(me.y, params.alpha0[i]), e_b);
  s.u = (1.0 - params.lambda) * s.u_cb + params.lambda * s.u_beacon;
  return s;
}

double steering_law(int i, const WorldState& world, const ControlParams& params) {
  return steering_terms(i, world, params).u;
}

double steering_law_shape_form(int i, const ShapeState& s, const ControlParams& p) {
  const int n = s.n();
  const int next = (i + 1) % n;
  if (s.rho[i] <= kCollocationFloor) collocated(0.0, i, next, s.rho[i]);
  if (s.rho_b[i] <= kCollocationFloor) collocated(0.0, i, -1, s.rho_b[i]);
  const double lam = p.lambda;
  return lam * p.mu_b[i] * std::sin(s.kappa_b[i] - p.alpha0[i]) +
         (1.0 - lam) * p.mu[i] * std::sin(s.kappa[i] - p.alpha[i]) +
         (1.0 - lam) / s.rho[i] *
             (std::sin(s.kappa[i]) + p.nu[next] / p.nu[i] * std::sin(s.theta[next]));
}

std::vector<AgentDerivative> world_derivative(const WorldState& world, const ControlParams& params) {
  std::vector<AgentDerivative> out(world.n());
  for (int i = 0; i < world.n(); ++i) {
    const auto& a = world.agents[i];
    const double u = steering_law(i, world, params);
    const double nu = params.nu[i];
    out[i].u = u;
    out[i].dr = nu * a.x;
    out[i].dx = (nu * u) * a.y;
    out[i].dy = (-nu * u) * a.x;
  }
  return out;
}

void check_collocation(const WorldState& world) {
  const int n = world.n();
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    const double d = norm(world.agents[next].r - world.agents[i].r);
    if (!(d > kCollocationFloor)) collocated(world.t, i, next, d);
    const double db = norm(world.beacon - world.agents[i].r);
    if (!(db > kCollocationFloor)) collocated(world.t, i, -1, db);
  }
}

Trajectory simulate(const WorldState& world0, const ControlParams& params,
                    const SimulationOptions& opt) {
  params.validate();
  if (world0.n() != params.n()) throw PreconditionError("simulate: agent count does not match params");
  if (!(opt.duration > 0.0) || !(opt.dt > 0.0))
    throw PreconditionError("simulate: duration and dt must be positive");
  check_collocation(world0);

  const int n = world0.n();
  const int stride = std::max(1, opt.record_every);
  WorldState scratch = world0;
  Field field = [&](std::span<const double> v, std::span<double> out) {
    unpack(v, scratch);
    for (int i = 0; i < n; ++i) {
      const auto& a = scratch.agents[i];
      const double nu = params.nu[i];
      const double u = steering_law(i, scratch, params);
      out[6 * i + 0] = nu * a.x.x;
      out[6 * i + 1] = nu * a.x.y;
      out[6 * i + 2] = nu * u * a.y.x;
      out[6 * i + 3] = nu * u * a.y.y;
      out[6 * i + 4] = -nu * u * a.x.x;
      out[6 * i + 5] = -nu * u * a.x.y;
    }
  };

  Trajectory traj;
  traj.samples.push_back(world0);
  WorldState current = world0;
  std::vector<double> state(6 * n);
  pack(current, state);
  Rk4Stepper stepper(state.size());

  const auto steps = static_cast<long long>(std::llround(opt.duration / opt.dt));
  for (long long s = 1; s <= steps; ++s) {
    scratch.t = current.t;
    stepper.step(field, state, opt.dt);
    unpack(state, current);
    current.t = world0.t + static_cast<double>(s) * opt.dt;
    for (auto& a : current.agents) {
      const double len = norm(a.x);
      if (!std::isfinite(len) || !std::isfinite(a.r.x) || !std::isfinite(a.r.y) || len == 0.0)
        throw NumericError("simulate: non-finite state at t=" + detail::num(current.t));
      a.x = a.x * (1.0 / len);
      a.y = perp(a.x);
    }
    pack(current, state);
    check_collocation(current);
    if (opt.on_step) opt.on_step(current);
    if (s % stride == 0 || s == steps) traj.samples.push_back(current);
  }
  return traj;
}

ShapeState extract_shape(const WorldState& world) {
  check_collocation(world);
  const int n = world.n();
  ShapeState s = ShapeState::zeros(n);
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    const int prev = (i + n - 1) % n;
    const auto& a = world.agents[i];
    const Vec2 to_next = world.agents[next].r - a.r;   // r_{i+1,i}
    const Vec2 to_prev = world.agents[prev].r - a.r;   // -r_{i,i-1}
    const Vec2 to_beacon = world.beacon - a.r;         // r_{b,i}
    s.rho[i] = norm(to_next);
    s.kappa[i] = wrap_angle(angle_between(a.x, to_next));
    s.theta[i] = wrap_angle(angle_between(a.x, to_prev));
    s.rho_b[i] = norm(to_beacon);
    s.kappa_b[i] = wrap_angle(angle_between(a.x, to_beacon));
  }
  return s;
}

WorldState random_world(int n, std::uint64_t seed, double half_width, Vec2 beacon) {
  if (n < 2) throw PreconditionError("random_world: need at least 2 agents");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-half_width, half_width);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  constexpr double kMargin = 0.05;

  WorldState w;
  w.beacon = beacon;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    w.agents.clear();
    for (int i = 0; i < n; ++i) {
      const Vec2 r{beacon.x + pos(rng), beacon.y + pos(rng)};
      w.agents.push_back(AgentState::at(r, ang(rng)));
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      ok = norm(w.agents[(i + 1) % n].r - w.agents[i].r) > kMargin &&
           norm(w.beacon - w.agents[i].r) > kMargin;
    }
    if (ok) return w;
  }
  throw NumericError("random_world: could not draw a non-collocated configuration");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ControlParams& params,
                          const std::vector<std::string>& header_comments) {
  for (const auto& c : header_comments) os << "# " << c << '\n';
  os << "# units: lengths in length units, angles in radians, t in time units\n";
  os << "# heading_i = atan2(x_i.y, x_i.x); u_i = steering curvature (1/length)\n";
  if (traj.samples.empty()) return;
  const int n = traj.samples.front().n();
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",r" << i << "_x,r" << i << "_y,heading" << i;
  os << ",beacon_x,beacon_y";
  for (int i = 1; i <= n; ++i) os << ",u" << i;
  os << '\n';
  for (const auto& w : traj.samples) {
    os << detail::num(w.t);
    for (const auto& a : w.agents)
      os << ',' << detail::num(a.r.x) << ',' << detail::num(a.r.y) << ',' << detail::num(a.heading());
    os << ',' << detail::num(w.beacon.x) << ',' << detail::num(w.beacon.y);
    for (int i = 0; i < n; ++i) os << ',' << detail::num(steering_law(i, w, params));
    os << '\n';
  }
}

}  // namespace pursuit
