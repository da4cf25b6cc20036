#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "pursuit/types.hpp"

namespace pursuit {

// Self-steering particle: position, unit heading x, and frame normal y = x rotated by +pi/2.
struct AgentState {
  Vec2 r;
  Vec2 x{1.0, 0.0};
  Vec2 y{0.0, 1.0};

  static AgentState at(Vec2 position, double heading);
  double heading() const { return std::atan2(x.y, x.x); }
};

struct WorldState {
  std::vector<AgentState> agents;
  Vec2 beacon;
  double t = 0.0;

  int n() const { return static_cast<int>(agents.size()); }
};

// The two components of the steering law for one agent and their blend.
struct SteeringTerms {
  double u_cb = 0.0;      // constant-bearing pursuit of agent i+1
  double u_beacon = 0.0;  // bearing deviation toward the beacon
  double u = 0.0;         // (1 - lambda) u_cb + lambda u_beacon
};

// Vector form of the control (authoritative). Throws CollisionError when
// agent i is collocated with its neighbour or the beacon.
SteeringTerms steering_terms(int i, const WorldState& world, const ControlParams& params);
double steering_law(int i, const WorldState& world, const ControlParams& params);

// Same control evaluated from the scalar shape variables of agent i.
double steering_law_shape_form(int i, const ShapeState& shape, const ControlParams& params);

struct AgentDerivative {
  Vec2 dr, dx, dy;
  double u = 0.0;
};

// Time derivative of every agent frame; the beacon is stationary.
std::vector<AgentDerivative> world_derivative(const WorldState& world, const ControlParams& params);

// Throws CollisionError if any neighbour pair or agent-beacon pair is within the floor.
void check_collocation(const WorldState& world);

struct SimulationOptions {
  double duration = 10.0;
  double dt = 1e-3;
  int record_every = 1;  // keep every k-th step (the initial and final states are always kept)
  // Optional hook invoked after every step with the post-step world.
  std::function<void(const WorldState&)> on_step;
};

struct Trajectory {
  std::vector<WorldState> samples;
};

// RK4 with heading renormalisation after each step. Aborts with
// CollisionError (time, pair) on a collocation and NumericError on a
// non-finite state.
Trajectory simulate(const WorldState& world0, const ControlParams& params,
                    const SimulationOptions& options);

// Shape variables of a world; angles wrapped to (-pi, pi].
ShapeState extract_shape(const WorldState& world);

// Uniform random positions in a square of side 2*half_width centred on the
// beacon, uniform random headings. Resamples any draw that violates the
// collocation floor by a margin.
WorldState random_world(int n, std::uint64_t seed, double half_width = 2.0, Vec2 beacon = {});

// Trajectory CSV: '#' header comments, a column header row, then per sample
// t, (r_x, r_y, heading) per agent, beacon_x, beacon_y, u per agent.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ControlParams& params,
                          const std::vector<std::string>& header_comments = {});

}  // namespace pursuit
