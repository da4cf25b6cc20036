#include "pursuit/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <ostream>

#include "format.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/numerics.hpp"

namespace pursuit {

namespace {

double sum_alpha(const ControlParams& p) { return std::accumulate(p.alpha.begin(), p.alpha.end(), 0.0); }

// Fill an equilibrium from its branch, alpha* and direction; the caller has
// already screened the existence conditions.
CirclingEquilibrium build(const ControlParams& p, const BranchAssignment& br, double a_star,
                          CirclingDirection dir, double beacon_margin, double neighbour_margin) {
  const int n = p.n();
  const double sgn = static_cast<double>(static_cast<int>(dir));
  const double mu = p.mu.front();
  const double lam = p.lambda;
  CirclingEquilibrium eq;
  eq.branch = br;
  eq.alpha_star = a_star;
  eq.direction = dir;
  eq.beacon_margin = beacon_margin;
  eq.neighbour_margin = neighbour_margin;
  eq.rho_b = lam / (mu * lam * std::cos(p.alpha0.front()) + mu * (1.0 - lam) * sgn * std::sin(a_star));
  eq.kappa.resize(n);
  eq.theta.resize(n);
  eq.rho.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = br.sigma[i];
    eq.kappa[i] = wrap_angle(kPi * (1.0 - s) / 2.0 + s * a_star + p.alpha[i]);
  }
  for (int i = 0; i < n; ++i) {
    eq.theta[(i + 1) % n] = wrap_angle(kPi - eq.kappa[i]);
    eq.rho[i] = 2.0 * eq.rho_b * sgn * std::sin(eq.kappa[i]);
  }
  return eq;
}

struct Margins {
  double beacon;
  double neighbour;
};

Margins margins(const ControlParams& p, const std::vector<int>& sigma, double a_star, double sgn) {
  Margins m;
  m.beacon = p.lambda * std::cos(p.alpha0.front()) + (1.0 - p.lambda) * sgn * std::sin(a_star);
  m.neighbour = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sigma.size(); ++i)
    m.neighbour = std::min(m.neighbour, sgn * std::sin(a_star + sigma[i] * p.alpha[i]));
  return m;
}

}  // namespace

int BranchAssignment::M() const {
  return static_cast<int>(std::count(sigma.begin(), sigma.end(), 1));
}

std::string BranchAssignment::sigma_bits() const {
  std::string s;
  for (int v : sigma) s += v == 1 ? '1' : '0';
  return s;
}

std::optional<double> alpha_star(const BranchAssignment& br, const ControlParams& p) {
  const int n = static_cast<int>(br.sigma.size());
  const int q = br.imbalance();
  if (q == 0) return std::nullopt;
  const double value = (static_cast<double>(br.m + br.M() - n) * kPi - sum_alpha(p)) / q;
  return wrap_angle(value);
}

DegenerateClass classify_degenerate(const ControlParams& p) {
  if (p.n() % 2 != 0) return DegenerateClass::NotApplicable;
  const double s = sum_alpha(p);
  return std::abs(std::sin(s)) < 1e-9 ? DegenerateClass::Continuum
                                      : DegenerateClass::NoBranchEquilibria;
}

EquilibriumSet enumerate_equilibria(const ControlParams& p, std::optional<CirclingDirection> direction) {
  require_assumptions(p, true, true, true, false, "enumerate_equilibria");
  const int n = p.n();
  if (n > kMaxEnumerationAgents)
    throw PreconditionError("enumerate_equilibria: n=" + std::to_string(n) +
                            " exceeds the branch enumeration cap of " +
                            std::to_string(kMaxEnumerationAgents));

  EquilibriumSet out;
  out.degenerate = classify_degenerate(p);
  if (std::abs(std::sin(sum_alpha(p))) < 1e-9) {
    out.unclassified = true;
    return out;
  }

  std::vector<CirclingDirection> dirs;
  if (!direction || *direction == CirclingDirection::CounterClockwise)
    dirs.push_back(CirclingDirection::CounterClockwise);
  if (!direction || *direction == CirclingDirection::Clockwise)
    dirs.push_back(CirclingDirection::Clockwise);

  // sigma in lexicographic order with -1 < +1, agent 1 most significant.
  const std::uint32_t count = 1u << n;
  for (std::uint32_t code = 0; code < count; ++code) {
    BranchAssignment br;
    br.sigma.resize(n);
    for (int i = 0; i < n; ++i) br.sigma[i] = (code >> (n - 1 - i)) & 1u ? 1 : -1;
    if (br.imbalance() == 0) continue;

    std::vector<double> seen;
    for (int m = 0; m < 2 * n; ++m) {
      br.m = m;
      const double a_star = *alpha_star(br, p);
      const bool dup = std::any_of(seen.begin(), seen.end(),
                                   [&](double s) { return angle_distance(s, a_star) < 1e-9; });
      if (dup) continue;
      seen.push_back(a_star);

      for (CirclingDirection dir : dirs) {
        const double sgn = static_cast<int>(dir);
        const Margins mg = margins(p, br.sigma, a_star, sgn);
        const double worst = std::min(mg.beacon, mg.neighbour);
        if (worst > kMarginBand) {
          out.equilibria.push_back(build(p, br, a_star, dir, mg.beacon, mg.neighbour));
        } else if (worst > -kMarginBand) {
          out.marginal.push_back({br, dir, a_star, mg.beacon, mg.neighbour});
        }
      }
    }
  }
  return out;
}

std::optional<CirclingEquilibrium> leftmost_equilibrium(const ControlParams& p, int m) {
  require_assumptions(p, true, true, true, false, "leftmost_equilibrium");
  BranchAssignment br;
  br.sigma.assign(p.n(), 1);
  br.m = m;
  const double a_star = *alpha_star(br, p);
  const Margins mg = margins(p, br.sigma, a_star, 1.0);
  if (std::min(mg.beacon, mg.neighbour) <= kMarginBand) return std::nullopt;
  return build(p, br, a_star, CirclingDirection::CounterClockwise, mg.beacon, mg.neighbour);
}

ShapeState equilibrium_shape(const CirclingEquilibrium& eq) {
  const int n = static_cast<int>(eq.kappa.size());
  ShapeState s = ShapeState::zeros(n);
  for (int i = 0; i < n; ++i) {
    s.rho[i] = eq.rho[i];
    s.kappa[i] = eq.kappa[i];
    s.theta[i] = eq.theta[i];
    s.rho_b[i] = eq.rho_b;
    s.kappa_b[i] = eq.kappa_b();
  }
  return s;
}

WorldState equilibrium_world(const CirclingEquilibrium& eq, Vec2 beacon, double phase) {
  const int n = static_cast<int>(eq.kappa.size());
  WorldState w;
  w.beacon = beacon;
  double polar = phase;
  for (int i = 0; i < n; ++i) {
    const Vec2 radial{std::cos(polar), std::sin(polar)};
    AgentState a;
    a.r = beacon + eq.rho_b * radial;
    // The beacon sits at angle kappa_b from the heading.
    a.x = rotate(-radial, -eq.kappa_b());
    a.y = perp(a.x);
    w.agents.push_back(a);
    polar += 2.0 * eq.kappa[i];
  }
  return w;
}

const char* to_string(DegenerateClass c) {
  switch (c) {
    case DegenerateClass::NotApplicable: return "NotApplicable";
    case DegenerateClass::Continuum: return "Continuum";
    case DegenerateClass::NoBranchEquilibria: return "NoBranchEquilibria";
  }
  return "?";
}

const char* to_string(CirclingDirection d) {
  return d == CirclingDirection::CounterClockwise ? "counter-clockwise" : "clockwise";
}

void write_equilibrium_report(std::ostream& os, const ControlParams& p, const EquilibriumSet& set) {
  using detail::angle;
  using detail::num;
  os << "# circling equilibrium report\n";
  os << "n = " << p.n() << "\n";
  os << "degenerate_branches = " << to_string(set.degenerate) << "\n";
  if (set.unclassified) {
    os << "status = Unclassified (sin(sum alpha) = 0; existence not characterised)\n";
    return;
  }
  os << "count = " << set.equilibria.size() << "\n";
  os << "marginal_count = " << set.marginal.size() << "\n";
  for (std::size_t idx = 0; idx < set.equilibria.size(); ++idx) {
    const auto& e = set.equilibria[idx];
    os << "\n[equilibrium " << idx + 1 << "]\n";
    os << "sigma = " << e.branch.sigma_bits() << "\n";
    os << "m = " << e.branch.m << "\n";
    os << "M = " << e.branch.M() << "\n";
    os << "direction = " << to_string(e.direction) << "\n";
    os << "alpha_star = " << angle(e.alpha_star) << "\n";
    os << "kappa_b = " << angle(e.kappa_b()) << "\n";
    os << "kappa =";
    for (double k : e.kappa) os << ' ' << angle(k) << ';';
    os << "\nrho =";
    for (double r : e.rho) os << ' ' << num(r);
    os << "\nrho_b = " << num(e.rho_b) << "\n";
    os << "margin_beacon = " << num(e.beacon_margin) << "\n";
    os << "margin_neighbour = " << num(e.neighbour_margin) << "\n";
  }
  for (const auto& mb : set.marginal) {
    os << "\n[marginal]\n";
    os << "sigma = " << mb.branch.sigma_bits() << "\nm = " << mb.branch.m
       << "\ndirection = " << to_string(mb.direction) << "\nalpha_star = " << angle(mb.alpha_star)
       << "\nmargin_beacon = " << num(mb.beacon_margin)
       << "\nmargin_neighbour = " << num(mb.neighbour_margin) << "\n";
  }
}

}  // namespace pursuit
