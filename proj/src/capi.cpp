#include "pursuit_lab.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "pursuit/config.hpp"
#include "pursuit/equilibria.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/full_space.hpp"
#include "pursuit/pure_shape.hpp"
#include "pursuit/run.hpp"
#include "pursuit/shape_space.hpp"
#include "pursuit/stability.hpp"

struct pl_params {
  pursuit::ControlParams value;
};

struct pl_world {
  pursuit::WorldState value;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_key;

struct InvalidArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
pl_status guarded(F&& body) {
  g_error.clear();
  g_error_key.clear();
  try {
    body();
    return PL_OK;
  } catch (const pursuit::ConfigError& e) {
    g_error = e.what();
    g_error_key = e.key();
    return PL_ERR_CONFIG;
  } catch (const pursuit::Error& e) {
    g_error = e.what();
    return static_cast<pl_status>(static_cast<int>(e.family()));
  } catch (const InvalidArgument& e) {
    g_error = e.what();
    return PL_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return PL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return PL_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return PL_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw InvalidArgument(what);
}

std::vector<double> per_agent(const double* v, int n, double fallback) {
  if (!v) return std::vector<double>(n, fallback);
  return std::vector<double>(v, v + n);
}

void check_shape_len(size_t len, int n) {
  require(len == static_cast<size_t>(5 * n), "shape buffer length must be 5n");
}

}  // namespace

extern "C" {

const char* pl_last_error(void) { return g_error.c_str(); }
const char* pl_last_error_key(void) { return g_error_key.c_str(); }
const char* pl_version(void) { return "1.0.0"; }

pl_status pl_params_homogeneous(int n, double mu, double lambda, double alpha, double alpha0, pl_params** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    auto p = pursuit::ControlParams::homogeneous(n, mu, lambda, alpha, alpha0);
    p.validate();
    *out = new pl_params{std::move(p)};
  });
}

pl_status pl_params_create(int n, double lambda, const double* mu, const double* mu_b, const double* alpha,
                           const double* alpha0, const double* nu, pl_params** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(n >= 2, "n must be at least 2");
    require(mu && alpha && alpha0, "mu, alpha and alpha0 are required");
    pursuit::ControlParams p;
    p.lambda = lambda;
    p.mu = per_agent(mu, n, 1.0);
    p.mu_b = mu_b ? per_agent(mu_b, n, 1.0) : p.mu;
    p.alpha = per_agent(alpha, n, 0.0);
    p.alpha0 = per_agent(alpha0, n, 0.0);
    p.nu = per_agent(nu, n, 1.0);
    p.validate();
    *out = new pl_params{std::move(p)};
  });
}

void pl_params_destroy(pl_params* p) { delete p; }
int pl_params_n(const pl_params* p) { return p ? p->value.n() : 0; }

pl_status pl_world_create(int n, const double* positions, const double* headings, double beacon_x, double beacon_y,
                          pl_world** out) {
  return guarded([&] {
    require(out && positions && headings, "null argument");
    require(n >= 2, "n must be at least 2");
    pursuit::WorldState w;
    w.beacon = {beacon_x, beacon_y};
    for (int i = 0; i < n; ++i) w.agents.push_back(pursuit::AgentState::at({positions[2 * i], positions[2 * i + 1]}, headings[i]));
    *out = new pl_world{std::move(w)};
  });
}

pl_status pl_world_random(int n, uint64_t seed, double half_width, double beacon_x, double beacon_y, pl_world** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new pl_world{pursuit::random_world(n, seed, half_width, {beacon_x, beacon_y})};
  });
}

pl_status pl_world_equilibrium(const pl_params* p, int m, double beacon_x, double beacon_y, pl_world** out) {
  return guarded([&] {
    require(p && out, "null argument");
    const auto eq = pursuit::leftmost_equilibrium(p->value, m);
    if (!eq) throw pursuit::PreconditionError("no counter-clockwise equilibrium at m=" + std::to_string(m));
    *out = new pl_world{pursuit::equilibrium_world(*eq, {beacon_x, beacon_y})};
  });
}

void pl_world_destroy(pl_world* w) { delete w; }
int pl_world_n(const pl_world* w) { return w ? w->value.n() : 0; }
double pl_world_time(const pl_world* w) { return w ? w->value.t : 0.0; }

pl_status pl_world_get(const pl_world* w, double* positions, double* headings) {
  return guarded([&] {
    require(w != nullptr, "world is null");
    for (int i = 0; i < w->value.n(); ++i) {
      const auto& a = w->value.agents[i];
      if (positions) {
        positions[2 * i] = a.r.x;
        positions[2 * i + 1] = a.r.y;
      }
      if (headings) headings[i] = a.heading();
    }
  });
}

pl_status pl_steering(const pl_world* w, const pl_params* p, int agent, double* u) {
  return guarded([&] {
    require(w && p && u, "null argument");
    require(agent >= 0 && agent < w->value.n(), "agent index out of range");
    require(p->value.n() == w->value.n(), "parameter and world sizes differ");
    *u = pursuit::steering_law(agent, w->value, p->value);
  });
}

pl_status pl_simulate(pl_world* w, const pl_params* p, double duration, double dt) {
  return guarded([&] {
    require(w && p, "null argument");
    require(p->value.n() == w->value.n(), "parameter and world sizes differ");
    pursuit::SimulationOptions opt;
    opt.duration = duration;
    opt.dt = dt;
    opt.record_every = 1 << 30;
    const auto traj = pursuit::simulate(w->value, p->value, opt);
    w->value = traj.samples.back();
  });
}

pl_status pl_extract_shape(const pl_world* w, double* shape, size_t len) {
  return guarded([&] {
    require(w && shape, "null argument");
    check_shape_len(len, w->value.n());
    const auto v = pursuit::extract_shape(w->value).to_vector();
    std::copy(v.begin(), v.end(), shape);
  });
}

pl_status pl_shape_derivative(const double* shape, size_t len, const pl_params* p, double* out) {
  return guarded([&] {
    require(shape && p && out, "null argument");
    check_shape_len(len, p->value.n());
    const auto s = pursuit::ShapeState::from_vector({shape, len});
    const auto d = pursuit::shape_derivative(s, p->value).to_vector();
    std::copy(d.begin(), d.end(), out);
  });
}

pl_status pl_integrate_shape(double* shape, size_t len, const pl_params* p, double duration, double dt,
                             double* max_residual) {
  return guarded([&] {
    require(shape && p, "null argument");
    check_shape_len(len, p->value.n());
    pursuit::ShapeIntegrationOptions opt;
    opt.duration = duration;
    opt.dt = dt;
    opt.record_every = 1 << 30;
    const auto traj = pursuit::integrate_shape(pursuit::ShapeState::from_vector({shape, len}), p->value, opt);
    const auto v = traj.samples.back().shape.to_vector();
    std::copy(v.begin(), v.end(), shape);
    if (max_residual) *max_residual = traj.max_residual;
  });
}

pl_status pl_equilibrium_count(const pl_params* p, int* count) {
  return guarded([&] {
    require(p && count, "null argument");
    *count = static_cast<int>(pursuit::enumerate_equilibria(p->value).equilibria.size());
  });
}

pl_status pl_leftmost_equilibrium(const pl_params* p, int m, double* rho_b, double* alpha_star) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    const auto eq = pursuit::leftmost_equilibrium(p->value, m);
    if (!eq) throw pursuit::PreconditionError("no counter-clockwise equilibrium at m=" + std::to_string(m));
    if (rho_b) *rho_b = eq->rho_b;
    if (alpha_star) *alpha_star = eq->alpha_star;
  });
}

pl_status pl_routh_necessary(const pl_params* p, int m, int* ok) {
  return guarded([&] {
    require(p && ok, "null argument");
    *ok = pursuit::routh_necessary(p->value, m).necessary_ok ? 1 : 0;
  });
}

pl_status pl_spectrum(const pl_params* p, int m, double* values, size_t len, int* axis_count) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    const auto rep = pursuit::spectrum_report(p->value, m);
    if (values) {
      require(len == 2 * rep.entries.size(), "spectrum buffer length must be 10n");
      for (size_t i = 0; i < rep.entries.size(); ++i) {
        values[2 * i] = rep.entries[i].value.real();
        values[2 * i + 1] = rep.entries[i].value.imag();
      }
    }
    if (axis_count) *axis_count = rep.axis_count;
  });
}

pl_status pl_reduced_equilibrium(const pl_params* p, int k, double* rho1, double* kappa1_stable) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    const auto eq = pursuit::reduced_equilibrium(p->value, k);
    if (!eq) throw pursuit::PreconditionError("no reduced equilibrium for k=" + std::to_string(k));
    if (rho1) *rho1 = eq->rho1;
    if (kappa1_stable) {
      *kappa1_stable = std::nan("");
      for (const auto& pt : eq->points)
        if (pt.stability == pursuit::ReducedStability::Stable) *kappa1_stable = pt.kappa1;
    }
  });
}

pl_status pl_invariant_region(const pl_params* p, int k, int* holds, double* value) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    const auto r = pursuit::invariant_region_check(p->value, k);
    if (holds) *holds = r.holds ? 1 : 0;
    if (value) *value = r.value;
  });
}

pl_status pl_asymptote(const pl_params* p, int k, int* conclusive, double* kappa1) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    const auto a = pursuit::asymptote_prediction(p->value, k);
    if (conclusive) *conclusive = a.conclusive ? 1 : 0;
    if (kappa1) *kappa1 = a.kappa1;
  });
}

pl_status pl_reduced_derivative(const pl_params* p, int k, double kappa1, double rho1, double* dkappa1,
                                double* drho1) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    const auto r = pursuit::reduced_derivative(kappa1, rho1, p->value, k);
    if (dkappa1) *dkappa1 = r.dkappa1;
    if (drho1) *drho1 = r.drho1;
  });
}

pl_status pl_run(const char* mode, const char* config_path, const char* out_dir, const uint64_t* seed,
                 const char* const* overrides, size_t override_count) {
  return guarded([&] {
    require(mode && config_path, "mode and config path are required");
    const auto parsed = pursuit::parse_mode(mode);
    if (!parsed) throw pursuit::ConfigError("run.mode", std::string("unknown mode '") + mode + "'");
    std::vector<std::string> ov;
    for (size_t i = 0; i < override_count; ++i) {
      require(overrides && overrides[i], "null override");
      ov.emplace_back(overrides[i]);
    }
    if (out_dir) ov.push_back(std::string("run.out=") + out_dir);
    if (seed) ov.push_back("run.seed=" + std::to_string(*seed));
    pursuit::run(pursuit::parse_config_file(config_path, *parsed, ov));
  });
}

}  // extern "C"
