// Exercises the shared library purely through its C interface.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pursuit_lab.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Params {
  pl_params* p = nullptr;
  ~Params() { pl_params_destroy(p); }
};

struct World {
  pl_world* w = nullptr;
  ~World() { pl_world_destroy(w); }
};

std::string cfg(const char* name) { return std::string(PURSUIT_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST(CApi, ReferenceEquilibrium) {
  Params p;
  ASSERT_EQ(pl_params_homogeneous(3, 1.0, 0.5, kPi / 6, kPi / 4, &p.p), PL_OK);
  EXPECT_EQ(pl_params_n(p.p), 3);
  double rho_b = 0, alpha_star = 0;
  ASSERT_EQ(pl_leftmost_equilibrium(p.p, 1, &rho_b, &alpha_star), PL_OK);
  EXPECT_NEAR(rho_b, 2.0 * std::sqrt(2.0) - 2.0, 1e-12);
  EXPECT_NEAR(alpha_star, kPi / 6, 1e-12);
  int count = 0;
  ASSERT_EQ(pl_equilibrium_count(p.p, &count), PL_OK);
  EXPECT_GT(count, 0);
}

TEST(CApi, EquilibriumWorldIsStationaryInShape) {
  Params p;
  World w;
  ASSERT_EQ(pl_params_homogeneous(3, 1.0, 0.5, kPi / 6, kPi / 4, &p.p), PL_OK);
  ASSERT_EQ(pl_world_equilibrium(p.p, 1, 0.0, 0.0, &w.w), PL_OK);
  std::vector<double> s0(15), s1(15);
  ASSERT_EQ(pl_extract_shape(w.w, s0.data(), s0.size()), PL_OK);
  ASSERT_EQ(pl_simulate(w.w, p.p, 5.0, 1e-3), PL_OK);
  EXPECT_NEAR(pl_world_time(w.w), 5.0, 1e-9);
  ASSERT_EQ(pl_extract_shape(w.w, s1.data(), s1.size()), PL_OK);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(s0[5 * i], s1[5 * i], 1e-6);          // rho
    EXPECT_NEAR(s0[5 * i + 3], s1[5 * i + 3], 1e-6);  // rho_b
  }
  std::vector<double> d(15);
  ASSERT_EQ(pl_shape_derivative(s0.data(), s0.size(), p.p, d.data()), PL_OK);
  for (double v : d) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(CApi, SteeringIndexChecked) {
  Params p;
  World w;
  ASSERT_EQ(pl_params_homogeneous(3, 1.0, 0.5, kPi / 6, kPi / 4, &p.p), PL_OK);
  ASSERT_EQ(pl_world_random(3, 11, 2.0, 0.0, 0.0, &w.w), PL_OK);
  double u = NAN;
  ASSERT_EQ(pl_steering(w.w, p.p, 0, &u), PL_OK);
  EXPECT_TRUE(std::isfinite(u));
  EXPECT_EQ(pl_steering(w.w, p.p, 3, &u), PL_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(pl_last_error()).find("out of range"), std::string::npos);
}

TEST(CApi, ShapeIntegrationMatchesFullSpace) {
  Params p;
  World w;
  ASSERT_EQ(pl_params_homogeneous(3, 1.0, 0.5, kPi / 6, kPi / 4, &p.p), PL_OK);
  ASSERT_EQ(pl_world_random(3, 5, 2.0, 0.0, 0.0, &w.w), PL_OK);
  std::vector<double> shape(15), full(15);
  ASSERT_EQ(pl_extract_shape(w.w, shape.data(), shape.size()), PL_OK);
  double residual = 1.0;
  ASSERT_EQ(pl_integrate_shape(shape.data(), shape.size(), p.p, 2.0, 1e-3, &residual), PL_OK);
  EXPECT_LT(residual, 1e-6);
  ASSERT_EQ(pl_simulate(w.w, p.p, 2.0, 1e-3), PL_OK);
  ASSERT_EQ(pl_extract_shape(w.w, full.data(), full.size()), PL_OK);
  for (int i = 0; i < 15; ++i) {
    const double diff = std::remainder(shape[i] - full[i], 2 * kPi);
    EXPECT_NEAR(i % 5 == 0 || i % 5 == 3 ? shape[i] - full[i] : diff, 0.0, 1e-6) << i;
  }
}

TEST(CApi, SpectrumAndRouth) {
  Params p;
  ASSERT_EQ(pl_params_homogeneous(3, 1.0, 0.5, kPi / 6, kPi / 4, &p.p), PL_OK);
  int ok = -1;
  ASSERT_EQ(pl_routh_necessary(p.p, 1, &ok), PL_OK);
  EXPECT_EQ(ok, 1);
  std::vector<double> ev(30);
  int axis = 0;
  ASSERT_EQ(pl_spectrum(p.p, 1, ev.data(), ev.size(), &axis), PL_OK);
  EXPECT_EQ(axis, 7);
  EXPECT_EQ(pl_spectrum(p.p, 1, ev.data(), 12, &axis), PL_ERR_INVALID_ARGUMENT);
}

TEST(CApi, ReducedDynamics) {
  Params p;
  ASSERT_EQ(pl_params_homogeneous(3, 1.0, 0.5, kPi / 6, kPi / 4, &p.p), PL_OK);
  double rho1 = 0, kappa1 = 0;
  ASSERT_EQ(pl_reduced_equilibrium(p.p, 1, &rho1, &kappa1), PL_OK);
  EXPECT_NEAR(rho1, 1.4348778704, 1e-9);
  EXPECT_NEAR(kappa1, kPi / 3, 1e-12);
  double dk = 1, dr = 1;
  ASSERT_EQ(pl_reduced_derivative(p.p, 1, kappa1, rho1, &dk, &dr), PL_OK);
  EXPECT_NEAR(dk, 0.0, 1e-12);
  EXPECT_NEAR(dr, 0.0, 1e-12);

  Params f;
  ASSERT_EQ(pl_params_homogeneous(3, 2.0, 0.5, 7 * kPi / 12, 11 * kPi / 12, &f.p), PL_OK);
  EXPECT_EQ(pl_reduced_equilibrium(f.p, 2, &rho1, &kappa1), PL_ERR_PRECONDITION);
  int holds = 0, conclusive = 0;
  double value = 0, asym = 0;
  ASSERT_EQ(pl_invariant_region(f.p, 2, &holds, &value), PL_OK);
  EXPECT_EQ(holds, 1);
  EXPECT_NEAR(value, -std::sqrt(2.0) / 4, 1e-12);
  ASSERT_EQ(pl_asymptote(f.p, 2, &conclusive, &asym), PL_OK);
  EXPECT_EQ(conclusive, 1);
  EXPECT_NEAR(asym, 5 * kPi / 6, 1e-12);
}

TEST(CApi, InvalidParametersReported) {
  pl_params* p = nullptr;
  EXPECT_EQ(pl_params_homogeneous(3, 1.0, 1.0, kPi / 6, kPi / 4, &p), PL_ERR_PRECONDITION);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(pl_last_error()), "");
  EXPECT_EQ(pl_params_homogeneous(3, 1.0, 0.5, kPi / 6, kPi / 4, nullptr), PL_ERR_INVALID_ARGUMENT);
  const double mu[] = {1, 1, 1}, alpha[] = {0.5, 0.5, 0.5}, alpha0[] = {0.7, 0.7, 0.7};
  ASSERT_EQ(pl_params_create(3, 0.5, mu, nullptr, alpha, alpha0, nullptr, &p), PL_OK);
  EXPECT_STREQ(pl_last_error(), "");
  pl_params_destroy(p);
}

TEST(CApi, CollisionStatus) {
  Params p;
  World w;
  ASSERT_EQ(pl_params_homogeneous(2, 1.0, 0.5, 0.0, 0.0, &p.p), PL_OK);
  const double pos[] = {0.0, 0.0, 0.0, 0.0};
  const double heading[] = {0.0, 0.0};
  ASSERT_EQ(pl_world_create(2, pos, heading, 5.0, 5.0, &w.w), PL_OK);
  double u = 0;
  EXPECT_EQ(pl_steering(w.w, p.p, 0, &u), PL_ERR_COLLISION);
}

TEST(CApi, RunReportsConfigKey) {
  const std::string out = std::string(PURSUIT_WORK_DIR) + "/capi_bad";
  const char* ov[] = {"params.lambda=1.0"};
  EXPECT_EQ(pl_run("equilibria", cfg("reference.cfg").c_str(), out.c_str(), nullptr, ov, 1), PL_ERR_CONFIG);
  EXPECT_STREQ(pl_last_error_key(), "params.lambda");
  EXPECT_EQ(pl_run("nonsense", cfg("reference.cfg").c_str(), out.c_str(), nullptr, nullptr, 0), PL_ERR_CONFIG);
  EXPECT_STREQ(pl_last_error_key(), "run.mode");
}

TEST(CApi, RunWritesManifestWithSeed) {
  const std::string out = std::string(PURSUIT_WORK_DIR) + "/capi_run";
  const std::uint64_t seed = 99;
  const char* ov[] = {"integration.T=1"};
  ASSERT_EQ(pl_run("simulate", cfg("reference.cfg").c_str(), out.c_str(), &seed, ov, 1), PL_OK) << pl_last_error();
  std::ifstream in(out + "/manifest.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("seed = 99"), std::string::npos);
}
