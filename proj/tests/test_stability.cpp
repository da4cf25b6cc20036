#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "pursuit/equilibria.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/shape_space.hpp"
#include "pursuit/stability.hpp"
#include "support.hpp"

using namespace pursuit;
using pursuit::testing::reference_params;
using pursuit::testing::uniform;

namespace {

std::vector<cplx> full_spectrum_oracle(const BlockTriple& blocks, int n) {
  const auto dense = assemble_block_circulant(blocks, n);
  const int dim = 5 * n;
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = dense[r * dim + c];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<cplx> out;
  for (int i = 0; i < dim; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

std::vector<cplx> union_of_modes(const BlockTriple& blocks, int n) {
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) {
    const auto e = eig5(dk(blocks, k, n));
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

struct Draw {
  ControlParams p;
  int m;
};

// Random admissible draws: an equilibrium exists on the leftmost branch at m.
std::vector<Draw> admissible_draws(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Draw> out;
  while (static_cast<int>(out.size()) < count) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % (n - 1));
    ControlParams p = ControlParams::homogeneous(n, 1.0, uniform(rng, 0.02, 0.98), uniform(rng, -kPi, kPi),
                                                 uniform(rng, -kPi, kPi));
    try {
      abd(p, m);
    } catch (const PreconditionError&) {
      continue;
    }
    out.push_back({p, m});
  }
  return out;
}

}  // namespace

TEST(Abd, ReferenceValues) {
  const auto c = abd(reference_params(), 1);
  EXPECT_NEAR(c.a, 1.20711, 1e-4);
  EXPECT_NEAR(c.b, 0.78656, 1e-4);
  EXPECT_NEAR(c.d, 1.45711, 1e-4);
  EXPECT_NEAR(c.alpha_star, kPi / 6, 1e-15);
  // a is the inverse equilibrium radius.
  EXPECT_NEAR(c.a, 1.0 / leftmost_equilibrium(reference_params(), 1)->rho_b, 1e-12);
}

TEST(Abd, LambdaNearOne) {
  ControlParams p = reference_params();
  p.lambda = 1 - 1e-9;
  const auto c = abd(p, 1);
  EXPECT_NEAR(c.a, std::cos(kPi / 4), 1e-6);
  EXPECT_NEAR(c.b, std::sin(kPi / 4), 1e-6);
}

TEST(Abd, ZeroAngles) {
  // alpha* = m pi / n - alpha = 0 needs alpha = m pi / n.
  const double lam = 0.3;
  ControlParams p = ControlParams::homogeneous(4, 1, lam, kPi / 4, 0);
  const auto c = abd(p, 1);
  EXPECT_NEAR(c.alpha_star, 0.0, 1e-15);
  EXPECT_NEAR(c.a, 1.0, 1e-15);
  EXPECT_NEAR(c.b, 1 - lam, 1e-15);
  EXPECT_NEAR(c.d, 1 + (1 - lam) / std::tan(kPi / 4), 1e-12);
}

TEST(Abd, RejectsSingularAndNonexistent) {
  EXPECT_THROW(abd(reference_params(), 3), PreconditionError);
  ControlParams p = ControlParams::homogeneous(3, 1, 0.9, kPi / 6, kPi);
  EXPECT_THROW(abd(p, 1), PreconditionError);
}

TEST(Blocks, ReferenceQValues) {
  const auto q = block_triple(reference_params(), 1).q;
  EXPECT_NEAR(q.q1, 0.84127, 1e-4);
  EXPECT_NEAR(q.q2, 0.34847, 1e-4);
  EXPECT_NEAR(q.q3, 0.43301, 1e-4);
  EXPECT_NEAR(q.q4, -1.45711, 1e-4);
  EXPECT_NEAR(q.q5, -0.35355, 1e-4);
}

TEST(Blocks, Q4Identity) {
  for (const auto& d : admissible_draws(1, 20)) {
    ControlParams p = d.p;
    for (double& v : p.mu) v = 1.7;
    for (double& v : p.mu_b) v = 1.7;
    const auto q = block_triple(p, d.m).q;
    const double a = abd(p, d.m).a;
    EXPECT_NEAR(q.q4 / (-1.7 * 1.7 * a * a), 1.0, 1e-12);
  }
}

TEST(Blocks, NeighbourCouplingSparsity) {
  const auto b = block_triple(reference_params(), 1);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      if (c != 2) EXPECT_EQ(b.ahead[r][c], 0.0) << r << "," << c;
      if (r != 2) EXPECT_EQ(b.behind[r][c], 0.0) << r << "," << c;
    }
}

TEST(Blocks, MatchFiniteDifferenceJacobian) {
  const ControlParams p = reference_params();
  const auto eq = *leftmost_equilibrium(p, 1);
  const ShapeState s0 = equilibrium_shape(eq);
  const auto x0 = s0.to_vector();
  const int dim = static_cast<int>(x0.size());
  const auto dense = assemble_block_circulant(block_triple(p, 1), 3);
  const double h = 1e-6;
  for (int c = 0; c < dim; ++c) {
    auto xp = x0, xm = x0;
    xp[c] += h;
    xm[c] -= h;
    const auto fp = shape_derivative(ShapeState::from_vector(xp), p).to_vector();
    const auto fm = shape_derivative(ShapeState::from_vector(xm), p).to_vector();
    for (int r = 0; r < dim; ++r) EXPECT_NEAR((fp[r] - fm[r]) / (2 * h), dense[r * dim + c], 1e-5);
  }
}

TEST(Modes, RealAtZeroAndHalf) {
  const auto b = block_triple(reference_params(4), 1);
  const auto d0 = dk(b, 0, 4), d2 = dk(b, 2, 4);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      EXPECT_NEAR(std::abs(d0[r][c] - (b.self[r][c] + b.ahead[r][c] + b.behind[r][c])), 0.0, 1e-15);
      EXPECT_NEAR(std::abs(d2[r][c] - (b.self[r][c] - b.ahead[r][c] - b.behind[r][c])), 0.0, 1e-15);
    }
}

TEST(Modes, UnionMatchesAssembledSpectrum) {
  for (int n : {3, 4, 5}) {
    const auto b = block_triple(reference_params(n), 1);
    EXPECT_LT(multiset_distance(union_of_modes(b, n), full_spectrum_oracle(b, n)), 1e-6) << n;
  }
}

TEST(CharPoly, ReferenceModeZero) {
  const auto c = abd(reference_params(), 1);
  const double a = c.a, b = c.b, lam = 0.5;
  const ComplexPolynomial expect = ComplexPolynomial({1.0, 0.0, a * a}) * ComplexPolynomial({1.0, b, lam * a * a, 0.0});
  const auto got = char_poly(reference_params(), 1, 0);
  ASSERT_EQ(got.degree(), 5);
  for (int i = 0; i <= 5; ++i) EXPECT_NEAR(std::abs(got.coeffs()[i] - expect.coeffs()[i]), 0.0, 1e-12);
  EXPECT_NEAR(lam * a * a, 0.72856, 1e-4);
  const auto e = eig5(dk(block_triple(reference_params(), 1), 0, 3));
  const std::vector<cplx> want{0.0, cplx(0, a), cplx(0, -a), cplx(-0.39328, 0.75756), cplx(-0.39328, -0.75756)};
  EXPECT_LT(multiset_distance(std::vector<cplx>(e.begin(), e.end()), want), 1e-4);
}

TEST(CharPoly, RootsMatchModeEigenvalues) {
  for (const auto& d : admissible_draws(2, 10)) {
    const auto b = block_triple(d.p, d.m);
    for (int k = 0; k < d.p.n(); ++k) {
      const auto e = eig5(dk(b, k, d.p.n()));
      const auto r = poly_roots(char_poly(d.p, d.m, k));
      EXPECT_LT(multiset_distance(std::vector<cplx>(e.begin(), e.end()), r), 1e-6);
      const double mua = d.p.mu.front() * abd(d.p, d.m).a;
      const auto P = char_poly(d.p, d.m, k);
      EXPECT_LT(std::abs(P(cplx(0, mua))), 1e-9 * P.max_coeff_magnitude());
      EXPECT_LT(std::abs(P(cplx(0, -mua))), 1e-9 * P.max_coeff_magnitude());
    }
  }
}

TEST(Cubic, ModeZeroAndHalf) {
  const ControlParams p = reference_params(4);
  const auto c = abd(p, 1);
  const auto k0 = cubic_coeffs(p, 1, 0);
  EXPECT_NEAR(k0.c_t, c.b, 1e-15);
  EXPECT_NEAR(k0.c_h, 0.0, 1e-15);
  EXPECT_NEAR(k0.d_t, 0.5 * c.a, 1e-15);
  EXPECT_NEAR(k0.d_h, 0.0, 1e-15);
  EXPECT_NEAR(k0.e_t, 0.0, 1e-15);
  EXPECT_NEAR(k0.e_h, 0.0, 1e-15);
  const auto k2 = cubic_coeffs(p, 1, 2);
  const double cot = 1.0 / std::tan(kPi / 4);
  EXPECT_NEAR(k2.c_h, 0.0, 1e-15);
  EXPECT_NEAR(k2.d_h, 0.0, 1e-15);
  EXPECT_NEAR(k2.e_h, 0.0, 1e-15);
  EXPECT_NEAR(k2.c_t, c.b + c.a * 0.5 * cot, 1e-12);
  EXPECT_NEAR(k2.d_t, c.d, 1e-12);
  EXPECT_NEAR(k2.e_t, 0.5 * std::cos(c.alpha_star), 1e-12);
}

TEST(Cubic, FactorisationReconstructsCharPoly) {
  const auto f = factored_char_poly(reference_params(), 1, 1);
  const auto p = char_poly(reference_params(), 1, 1);
  for (int i = 0; i <= 5; ++i) EXPECT_LT(std::abs(f.coeffs()[i] - p.coeffs()[i]), 1e-10);
  for (const auto& d : admissible_draws(4, 10))
    for (int k = 0; k < d.p.n(); ++k) {
      const auto a = factored_char_poly(d.p, d.m, k), b = char_poly(d.p, d.m, k);
      for (int i = 0; i <= 5; ++i) EXPECT_LT(std::abs(a.coeffs()[i] - b.coeffs()[i]), 1e-10 * (1 + b.max_coeff_magnitude()));
    }
}

TEST(Routh, AgreesWithCubicRoots) {
  int disagreements = 0, banded = 0, stable = 0;
  for (const auto& d : admissible_draws(5, 50)) {
    const auto v = routh_necessary(d.p, d.m);
    double worst = -1e300;
    for (int k = 0; k < d.p.n(); ++k)
      for (cplx r : cubic_roots(d.p, d.m, k, true)) worst = std::max(worst, r.real());
    if (std::abs(worst) < 1e-9) {
      ++banded;
      continue;
    }
    stable += worst < 0;
    if (v.necessary_ok != (worst < 0)) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_GT(stable, 0);
  (void)banded;
}

TEST(Routh, InvariantUnderGainScaling) {
  for (const auto& d : admissible_draws(6, 30)) {
    const bool base = routh_necessary(d.p, d.m).necessary_ok;
    for (double mu : {0.5, 2.0, 10.0}) {
      ControlParams p = d.p;
      for (double& v : p.mu) v = mu;
      for (double& v : p.mu_b) v = mu;
      EXPECT_EQ(routh_necessary(p, d.m).necessary_ok, base);
    }
  }
}

TEST(QuickChecks, ImpliedByRouth) {
  const auto ref = quick_checks(reference_params(), 1);
  EXPECT_NEAR(ref.b, 0.78656, 1e-4);
  EXPECT_TRUE(ref.damping_ok);
  for (const auto& d : admissible_draws(7, 100)) {
    if (!routh_necessary(d.p, d.m).necessary_ok) continue;
    const auto c = quick_checks(d.p, d.m);
    EXPECT_TRUE(c.damping_ok);
    EXPECT_TRUE(c.half_mode_ok);
  }
}

TEST(QuickChecks, NegativeBFailsBoth) {
  // Heavy beacon weight with alpha0 = -pi/2 drives b = lambda sin(alpha0) + ... negative.
  ControlParams p = ControlParams::homogeneous(3, 1, 0.9, kPi / 3 - 2.6, -kPi / 2);
  const auto c = quick_checks(p, 1);
  EXPECT_LT(c.b, 0.0);
  EXPECT_FALSE(c.damping_ok);
  EXPECT_FALSE(routh_necessary(p, 1).necessary_ok);
}

TEST(Spectrum, ReferenceGroups) {
  const auto s = spectrum_report(reference_params(), 1);
  EXPECT_EQ(s.entries.size(), 15u);
  EXPECT_EQ(s.constraint_count, 7);
  EXPECT_EQ(s.informative_count, 8);
  EXPECT_EQ(s.axis_count, 7);
  EXPECT_TRUE(s.diagnostics.empty());
}

TEST(Spectrum, InformativeScalesWithGain) {
  const auto s1 = spectrum_report(reference_params(3, 1.0), 1);
  const auto s3 = spectrum_report(reference_params(3, 3.0), 1);
  EXPECT_EQ(s3.constraint_count, s1.constraint_count);
  auto a = s1.informative();
  for (auto& z : a) z *= 3.0;
  const auto b = s3.informative();
  EXPECT_LT(multiset_distance(a, b), 1e-6 * 3.0);
}
