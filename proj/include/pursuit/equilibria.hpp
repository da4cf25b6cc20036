#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "pursuit/full_space.hpp"
#include "pursuit/types.hpp"

namespace pursuit {

// Which side of the binary branch tree each agent sits on, plus the winding m.
struct BranchAssignment {
  std::vector<int> sigma;  // entries +1 / -1
  int m = 0;

  int M() const;  // number of +1 entries
  int imbalance() const { return 2 * M() - static_cast<int>(sigma.size()); }  // 2M - n
  std::string sigma_bits() const;  // "1" for +1, "0" for -1, agent 1 first
};

enum class CirclingDirection { CounterClockwise = 1, Clockwise = -1 };

struct CirclingEquilibrium {
  BranchAssignment branch;
  double alpha_star = 0.0;
  CirclingDirection direction = CirclingDirection::CounterClockwise;
  std::vector<double> kappa;
  std::vector<double> theta;
  std::vector<double> rho;
  double rho_b = 0.0;
  // Left-hand sides of the two existence conditions (beacon term, and the
  // minimum over agents of the neighbour term), with the direction sign folded in.
  double beacon_margin = 0.0;
  double neighbour_margin = 0.0;

  double kappa_b() const { return static_cast<int>(direction) * kPiHalf; }
  static constexpr double kPiHalf = 1.57079632679489661923;
};

// Branch whose existence margin lies within the borderline band; neither
// accepted nor rejected.
struct MarginalBranch {
  BranchAssignment branch;
  CirclingDirection direction;
  double alpha_star = 0.0;
  double beacon_margin = 0.0;
  double neighbour_margin = 0.0;
};

enum class DegenerateClass { NotApplicable, Continuum, NoBranchEquilibria };

struct EquilibriumSet {
  std::vector<CirclingEquilibrium> equilibria;
  std::vector<MarginalBranch> marginal;
  // sin(sum alpha) vanished: existence is not characterised, nothing enumerated.
  bool unclassified = false;
  DegenerateClass degenerate = DegenerateClass::NotApplicable;
};

inline constexpr int kMaxEnumerationAgents = 16;
inline constexpr double kMarginBand = 1e-9;

// ((m + M - n) pi - sum alpha) / (2M - n), wrapped. Returns nullopt for a
// degenerate branch (2M - n = 0).
std::optional<double> alpha_star(const BranchAssignment& branch, const ControlParams& params);

// All admissible circling equilibria turning in `direction` (both when
// nullopt), ordered lexicographically by (sigma, m).
EquilibriumSet enumerate_equilibria(const ControlParams& params,
                                    std::optional<CirclingDirection> direction = std::nullopt);

ShapeState equilibrium_shape(const CirclingEquilibrium& eq);

// Beacon at `beacon`, agent 1 at polar angle `phase`; successive agents
// advance by 2 kappa_i along the circle of radius rho_b.
WorldState equilibrium_world(const CirclingEquilibrium& eq, Vec2 beacon = {}, double phase = 0.0);

DegenerateClass classify_degenerate(const ControlParams& params);

// Counter-clockwise equilibrium on the all-(+1) branch at winding m, if admissible.
std::optional<CirclingEquilibrium> leftmost_equilibrium(const ControlParams& params, int m);

const char* to_string(DegenerateClass c);
const char* to_string(CirclingDirection d);

void write_equilibrium_report(std::ostream& os, const ControlParams& params, const EquilibriumSet& set);

}  // namespace pursuit
