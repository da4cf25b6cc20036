#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "pursuit/equilibria.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/full_space.hpp"
#include "pursuit/shape_space.hpp"
#include "support.hpp"

using namespace pursuit;
using pursuit::testing::reference_params;

namespace {

// Circling radius from the curvature balance u = 1/rho_b at the reference
// equilibrium, solved by fixed-point iteration instead of the closed form.
double reference_radius_oracle() {
  const double lam = 0.5, mu = 1.0, k = kPi / 3;
  double rb = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double rho = 2 * rb * std::sin(k);
    const double u = lam * mu * std::sin(kPi / 2 - kPi / 4) + (1 - lam) * mu * std::sin(k - kPi / 6) +
                     (1 - lam) / rho * (std::sin(k) + std::sin(kPi - k));
    rb = 0.5 * rb + 0.5 / u;
  }
  return rb;
}

const CirclingEquilibrium* find_reference(const EquilibriumSet& set) {
  for (const auto& e : set.equilibria)
    if (e.direction == CirclingDirection::CounterClockwise &&
        std::all_of(e.kappa.begin(), e.kappa.end(), [](double k) { return std::abs(k - kPi / 3) < 1e-9; }))
      return &e;
  return nullptr;
}

}  // namespace

TEST(AlphaStar, LeftmostBranchFormula) {
  ControlParams p = reference_params();
  BranchAssignment br{{1, 1, 1}, 1};
  EXPECT_NEAR(*alpha_star(br, p), kPi / 6, 1e-15);
  for (int m = 0; m < 6; ++m) {
    br.m = m;
    EXPECT_LT(angle_distance(*alpha_star(br, p), m * kPi / 3 - kPi / 6), 1e-12);
  }
}

TEST(AlphaStar, TwoAgents) {
  ControlParams p = ControlParams::homogeneous(2, 1, 0.5, kPi / 4, 0);
  EXPECT_NEAR(*alpha_star({{1, 1}, 1}, p), kPi / 4, 1e-15);
  EXPECT_FALSE(alpha_star({{1, -1}, 1}, p).has_value());
}

TEST(Enumerate, ReferenceEquilibriumPresent) {
  const auto set = enumerate_equilibria(reference_params());
  const auto* e = find_reference(set);
  ASSERT_NE(e, nullptr);
  const double rb = reference_radius_oracle();
  EXPECT_NEAR(e->rho_b, rb, 1e-10);
  EXPECT_NEAR(e->rho_b, 0.82843, 1e-4);
  for (double r : e->rho) {
    EXPECT_NEAR(r, 2 * rb * std::sin(kPi / 3), 1e-10);
    EXPECT_NEAR(r, 1.43488, 1e-4);
  }
  EXPECT_NEAR(e->kappa_b(), kPi / 2, 1e-15);
}

TEST(Enumerate, NoEquilibriaWhenBeaconTermDominates) {
  ControlParams p = ControlParams::homogeneous(3, 1, 0.9, kPi / 6, kPi);
  const auto set = enumerate_equilibria(p);
  EXPECT_TRUE(set.equilibria.empty());
}

TEST(Enumerate, EveryEquilibriumSumsToMultipleOfPi) {
  for (int n : {3, 4, 5}) {
    ControlParams p = ControlParams::homogeneous(n, 1.3, 0.4, 0.37, 0.8);
    p.alpha[1] = -0.2;
    const auto set = enumerate_equilibria(p);
    ASSERT_FALSE(set.unclassified);
    for (const auto& e : set.equilibria) {
      const double s = std::accumulate(e.kappa.begin(), e.kappa.end(), 0.0);
      EXPECT_NEAR(std::remainder(s, kPi), 0.0, 1e-9);
      const ShapeState sh = equilibrium_shape(e);
      EXPECT_LT(constraint_residuals(sh).max_abs(), 1e-9);
      for (double v : shape_derivative(sh, p).to_vector()) EXPECT_NEAR(v, 0.0, 1e-9);
    }
  }
}

TEST(Enumerate, UnclassifiedWhenOffsetsSumToMultipleOfPi) {
  ControlParams p = ControlParams::homogeneous(3, 1, 0.5, kPi / 3, 0.2);
  EXPECT_TRUE(enumerate_equilibria(p).unclassified);
}

TEST(Enumerate, RejectsHeterogeneousAndOversize) {
  ControlParams p = reference_params();
  p.mu_b[0] = 2.0;
  EXPECT_THROW(enumerate_equilibria(p), PreconditionError);
  EXPECT_THROW(enumerate_equilibria(reference_params(17)), PreconditionError);
}

TEST(Enumerate, DirectionFlipMirrorsShape) {
  const auto ccw = enumerate_equilibria(reference_params(), CirclingDirection::CounterClockwise);
  const auto cw = enumerate_equilibria(reference_params(), CirclingDirection::Clockwise);
  ASSERT_EQ(ccw.equilibria.size(), cw.equilibria.size());
  for (const auto& a : ccw.equilibria) {
    bool matched = false;
    for (const auto& b : cw.equilibria) {
      if (b.branch.sigma != a.branch.sigma) continue;
      bool same = std::abs(a.rho_b - b.rho_b) < 1e-12;
      for (std::size_t i = 0; i < a.kappa.size() && same; ++i)
        same = std::abs(a.rho[i] - b.rho[i]) < 1e-12 && angle_distance(a.kappa[i] + kPi, b.kappa[i]) < 1e-12;
      matched = matched || same;
    }
    EXPECT_TRUE(matched);
  }
}

TEST(EquilibriumWorld, EmbeddingRoundTrips) {
  for (const auto& e : enumerate_equilibria(reference_params(4)).equilibria) {
    const ShapeState want = equilibrium_shape(e);
    const ShapeState got = extract_shape(equilibrium_world(e, {0.3, -1.0}, 0.7));
    const auto a = want.to_vector(), b = got.to_vector();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::remainder(a[i] - b[i], 2 * kPi), 0.0, 1e-9);
  }
}

TEST(Degenerate, Classification) {
  ControlParams p = ControlParams::homogeneous(2, 1, 0.5, kPi / 2, 0);
  EXPECT_EQ(classify_degenerate(p), DegenerateClass::Continuum);
  p.alpha = {kPi / 4, kPi / 4};
  EXPECT_EQ(classify_degenerate(p), DegenerateClass::NoBranchEquilibria);
  EXPECT_EQ(classify_degenerate(reference_params()), DegenerateClass::NotApplicable);
}
