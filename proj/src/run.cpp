#include "pursuit/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "format.hpp"
#include "pursuit/equilibria.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/pure_shape.hpp"
#include "pursuit/shape_space.hpp"
#include "pursuit/stability.hpp"

namespace pursuit {

namespace fs = std::filesystem;
using detail::angle;
using detail::num;

namespace {

class Output {
 public:
  explicit Output(const RunConfig& c) : dir_(c.out_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw ConfigError("run.out", "cannot create output directory '" + dir_.string() + "'");
  }

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw ConfigError("run.out", "cannot write '" + (dir_ / name).string() + "'");
    artifacts.push_back(name);
    return os;
  }

  std::vector<std::string> artifacts;

 private:
  fs::path dir_;
};

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_header(std::ostream& os, const RunConfig& c) {
  os << "mode = " << to_string(c.mode) << "\n";
  os << "n = " << c.n << "\n";
  os << "config_hash = " << hex64(c.hash()) << "\n";
}

std::vector<std::string> csv_comments(const RunConfig& c) {
  return {std::string("mode ") + to_string(c.mode), "config_hash " + hex64(c.hash()),
          "seed " + std::to_string(c.seed)};
}

double wrapped_diff(double a, double b) { return std::abs(wrap_angle(a - b)); }

// Per-variable distance between two shapes; angle slots compared on the circle.
double shape_distance(const ShapeState& a, const ShapeState& b) {
  double d = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    d = std::max({d, std::abs(a.rho[i] - b.rho[i]), std::abs(a.rho_b[i] - b.rho_b[i]),
                  wrapped_diff(a.kappa[i], b.kappa[i]), wrapped_diff(a.theta[i], b.theta[i]),
                  wrapped_diff(a.kappa_b[i], b.kappa_b[i])});
  }
  return d;
}

void run_simulate(const RunConfig& c, Output& out) {
  const WorldState w0 = initial_world(c);
  SimulationOptions opt;
  opt.duration = c.duration;
  opt.dt = c.dt;
  opt.record_every = c.record_every;
  const Trajectory traj = simulate(w0, c.params, opt);
  {
    auto os = out.open("trajectory.csv");
    write_trajectory_csv(os, traj, c.params, csv_comments(c));
  }
  auto os = out.open("summary.txt");
  write_header(os, c);
  os << "seed = " << c.seed << "\n";
  os << "T = " << num(c.duration) << "\ndt = " << num(c.dt) << "\n";
  const ShapeState last = extract_shape(traj.samples.back());
  os << "final_rho_b =";
  for (double v : last.rho_b) os << ' ' << num(v);
  os << "\nfinal_kappa_b =";
  for (double v : last.kappa_b) os << ' ' << num(v);
  os << "\n";
  const CirclingSummary cs = circling_summary(traj, c.window);
  os << "window = " << num(c.window) << "\n";
  os << "rho_b_mean = " << num(cs.rho_b_mean) << "\n";
  os << "rho_b_rel_spread = " << num(cs.rel_spread) << "\n";
  os << "kappa_b_error = " << num(cs.kappa_b_error) << "\n";
  os << "circling_direction = " << (cs.direction > 0 ? "counter-clockwise" : "clockwise") << "\n";
  os << "circling_converged = " << (cs.converged ? "true" : "false") << "\n";
  if (c.initial == InitialKind::Lift) {
    const SpiralSummary sp = spiral_summary(traj);
    os << "shape_ratio_drift = " << num(sp.ratio_drift) << "\n";
    os << "rho1_start = " << num(sp.rho1_start) << "\nrho1_end = " << num(sp.rho1_end) << "\n";
    os << "rho1_increasing = " << (sp.rho1_increasing ? "true" : "false") << "\n";
    os << "kappa1_end = " << angle(sp.kappa1_end) << "\n";
  }
}

void run_shape_sim(const RunConfig& c, Output& out) {
  const WorldState w0 = initial_world(c);
  ShapeIntegrationOptions opt;
  opt.duration = c.duration;
  opt.dt = c.dt;
  opt.record_every = c.record_every;
  const ShapeTrajectory st = integrate_shape(extract_shape(w0), c.params, opt);
  {
    auto os = out.open("shape_trajectory.csv");
    write_shape_csv(os, st, csv_comments(c));
  }
  const TwoRouteSummary tr = two_route(w0, c.params, c.duration, c.dt, c.record_every);
  auto os = out.open("summary.txt");
  write_header(os, c);
  os << "seed = " << c.seed << "\n";
  os << "T = " << num(c.duration) << "\ndt = " << num(c.dt) << "\n";
  os << "max_constraint_residual = " << num(st.max_residual) << "\n";
  os << "two_route_max_deviation = " << num(tr.max_deviation) << "\n";
}

void run_equilibria(const RunConfig& c, Output& out) {
  std::optional<CirclingDirection> dir;
  if (c.direction == "ccw") dir = CirclingDirection::CounterClockwise;
  if (c.direction == "cw") dir = CirclingDirection::Clockwise;
  const EquilibriumSet set = enumerate_equilibria(c.params, dir);
  auto os = out.open("equilibria.txt");
  os << "config_hash = " << hex64(c.hash()) << "\n";
  write_equilibrium_report(os, c.params, set);
}

// Largest entry-wise gap between a central-difference Jacobian of the shape
// dynamics and the assembled block-circulant matrix at the equilibrium.
double jacobian_gap(const ControlParams& p, int m) {
  const auto eq = leftmost_equilibrium(p, m);
  if (!eq) return std::numeric_limits<double>::quiet_NaN();
  const auto x0 = equilibrium_shape(*eq).to_vector();
  const int dim = static_cast<int>(x0.size());
  const auto dense = assemble_block_circulant(block_triple(p, m), p.n());
  const double h = 1e-6;
  double gap = 0.0;
  for (int col = 0; col < dim; ++col) {
    auto xp = x0, xm = x0;
    xp[col] += h;
    xm[col] -= h;
    const auto fp = shape_derivative(ShapeState::from_vector(xp), p).to_vector();
    const auto fm = shape_derivative(ShapeState::from_vector(xm), p).to_vector();
    for (int r = 0; r < dim; ++r) gap = std::max(gap, std::abs((fp[r] - fm[r]) / (2 * h) - dense[r * dim + col]));
  }
  return gap;
}

void run_stability(const RunConfig& c, Output& out) {
  const int m = *c.m;
  {
    auto os = out.open("stability.txt");
    os << "config_hash = " << hex64(c.hash()) << "\n";
    write_stability_report(os, c.params, m);
    os << "jacobian_fd_max_gap = " << num(jacobian_gap(c.params, m)) << "\n";
  }
  auto os = out.open("spectrum.csv");
  write_spectrum_csv(os, spectrum_report(c.params, m));
}

void run_pure_shape(const RunConfig& c, Output& out) {
  const int k = *c.k;
  const ManifoldSpec spec = manifold_spec(c.n, k);
  const PureShapeState s0 = lift(spec, c.kappa1, c.rho1);
  const auto full = integrate_pure_shape(s0, c.params, c.duration, c.dt, c.record_every);
  const auto red = integrate_reduced(c.kappa1, c.rho1, c.params, k, c.duration, c.dt, c.record_every);

  double max_manifold = 0.0, max_constraint = 0.0, max_mismatch = 0.0;
  int half_angle_flags = 0;
  {
    auto os = out.open("pure_shape.csv");
    for (const auto& line : csv_comments(c)) os << "# " << line << "\n";
    os << "t,kappa1,rho1,reduced_kappa1,reduced_rho1,manifold_residual,constraint_residual,half_angle_flag\n";
    for (std::size_t i = 0; i < full.size() && i < red.size(); ++i) {
      const auto& s = full[i].state;
      const double mr = manifold_residual(s, spec);
      const double cr = pure_constraint_residuals(s).max_abs();
      const bool flag = half_angle_guard(s).flagged;
      max_manifold = std::max(max_manifold, mr);
      max_constraint = std::max(max_constraint, cr);
      max_mismatch = std::max({max_mismatch, std::abs(s.kappa1 - red[i].kappa1), std::abs(s.rho1 - red[i].rho1)});
      half_angle_flags += flag;
      os << num(full[i].t) << ',' << num(s.kappa1) << ',' << num(s.rho1) << ',' << num(red[i].kappa1) << ','
         << num(red[i].rho1) << ',' << num(mr) << ',' << num(cr) << ',' << (flag ? 1 : 0) << '\n';
    }
  }
  auto os = out.open("pure_shape.txt");
  write_header(os, c);
  os << "k = " << k << "\n";
  os << "psi_const = " << angle(spec.psi) << "\nphi_b_const = " << angle(spec.phi_b)
     << "\nrho_tb_const = " << num(spec.rho_tb) << "\n";
  os << "initial_kappa1 = " << angle(c.kappa1) << "\ninitial_rho1 = " << num(c.rho1) << "\n";
  os << "max_manifold_residual = " << num(max_manifold) << "\n";
  os << "max_constraint_residual = " << num(max_constraint) << "\n";
  os << "max_reduced_mismatch = " << num(max_mismatch) << "\n";
  os << "half_angle_flagged_samples = " << half_angle_flags << "\n";
  const auto eq = reduced_equilibrium(c.params, k);
  if (eq) {
    os << "reduced_equilibrium_rho1 = " << num(eq->rho1) << "\n";
    for (const auto& pt : eq->points)
      os << "reduced_equilibrium = " << angle(pt.kappa1) << " " << to_string(pt.stability) << "\n";
    os << "stability_source = " << (eq->from_sign_test ? "sign test" : "numeric linearisation") << "\n";
  } else {
    os << "reduced_equilibrium = none\n";
  }
  const InvariantRegion region = invariant_region_check(c.params, k);
  os << "invariant_region_value = " << num(region.value) << "\n";
  os << "invariant_region_holds = " << (region.holds ? "true" : "false") << "\n";
  if (region.holds && has_balanced_gains(c.params)) {
    const auto a = asymptote_prediction(c.params, k);
    if (a.conclusive) os << "asymptote_kappa1 = " << angle(a.kappa1) << "\n";
    else os << "asymptote_kappa1 = inconclusive\n";
  }
}

void run_portrait(const RunConfig& c, Output& out) {
  const int k = *c.k;
  const PhasePortrait pp = phase_portrait(c.params, k, c.grid, c.portrait_seeds, c.duration, c.dt, c.record_every);
  {
    auto os = out.open("portrait_grid.csv");
    write_portrait_grid_csv(os, pp);
  }
  for (std::size_t i = 0; i < pp.trajectories.size(); ++i) {
    auto os = out.open("portrait_traj_" + std::to_string(i + 1) + ".csv");
    write_reduced_trajectory_csv(os, pp.trajectories[i]);
  }
  auto os = out.open("portrait.txt");
  write_header(os, c);
  os << "k = " << k << "\n";
  const InvariantRegion region = invariant_region_check(c.params, k);
  os << "invariant_region_value = " << num(region.value) << "\n";
  os << "invariant_region_holds = " << (region.holds ? "true" : "false") << "\n";
  const auto eq = reduced_equilibrium(c.params, k);
  os << "reduced_equilibrium = " << (eq ? "exists" : "none") << "\n";
  std::optional<double> asym;
  if (region.holds && has_balanced_gains(c.params)) {
    const auto a = asymptote_prediction(c.params, k);
    if (a.conclusive) asym = a.kappa1;
    os << "asymptote_kappa1 = " << (a.conclusive ? angle(a.kappa1) : std::string("inconclusive")) << "\n";
  }
  for (std::size_t i = 0; i < pp.trajectories.size(); ++i) {
    const auto& tr = pp.trajectories[i];
    bool inside = true;
    for (const auto& s : tr) inside = inside && in_region(region, s.kappa1, s.rho1);
    os << "[trajectory " << i + 1 << "]\n";
    os << "start = " << num(tr.front().kappa1) << ", " << num(tr.front().rho1) << "\n";
    os << "end = " << num(wrap_angle(tr.back().kappa1)) << ", " << num(tr.back().rho1) << "\n";
    os << "stays_in_region = " << (inside ? "true" : "false") << "\n";
    if (asym) os << "distance_to_asymptote = " << num(angle_distance(tr.back().kappa1, *asym)) << "\n";
  }
}

struct SweepRow {
  double value = 0.0;
  bool exists = false;
  bool routh_ok = false;
  bool damping_ok = false;
  bool half_mode_ok = false;
  double max_cubic_re = 0.0;
  std::string agreement;
};

SweepRow sweep_one(const RunConfig& c, double value) {
  ControlParams p = c.params;
  if (c.sweep_parameter == "lambda") p.lambda = value;
  if (c.sweep_parameter == "alpha") std::fill(p.alpha.begin(), p.alpha.end(), value);
  if (c.sweep_parameter == "alpha0") std::fill(p.alpha0.begin(), p.alpha0.end(), value);
  if (c.sweep_parameter == "mu") {
    std::fill(p.mu.begin(), p.mu.end(), value);
    std::fill(p.mu_b.begin(), p.mu_b.end(), value);
  }
  SweepRow row;
  row.value = value;
  const int m = *c.m;
  try {
    abd(p, m);
  } catch (const PreconditionError&) {
    row.agreement = "n/a";
    return row;
  }
  row.exists = true;
  row.routh_ok = routh_necessary(p, m).necessary_ok;
  const QuickChecks cr = quick_checks(p, m);
  row.damping_ok = cr.damping_ok;
  row.half_mode_ok = cr.half_mode_ok;
  row.max_cubic_re = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < p.n(); ++k)
    for (cplx z : cubic_roots(p, m, k, true)) row.max_cubic_re = std::max(row.max_cubic_re, z.real());
  if (std::abs(row.max_cubic_re) < 1e-9) row.agreement = "band";
  else row.agreement = (row.routh_ok == (row.max_cubic_re < 0)) ? "agree" : "disagree";
  return row;
}

void run_sweep(const RunConfig& c, Output& out) {
  const int count = c.sweep_samples;
  std::vector<SweepRow> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      const double v = count == 1 ? c.sweep_from : c.sweep_from + (c.sweep_to - c.sweep_from) * i / (count - 1);
      try {
        rows[i] = sweep_one(c, v);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(c.workers, count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  auto os = out.open("sweep.csv");
  for (const auto& line : csv_comments(c)) os << "# " << line << "\n";
  os << "index," << c.sweep_parameter << ",exists,routh_ok,damping_ok,half_mode_ok,max_cubic_re,agreement\n";
  for (int i = 0; i < count; ++i) {
    const auto& r = rows[i];
    os << i << ',' << num(r.value) << ',' << r.exists << ',' << r.routh_ok << ',' << r.damping_ok << ','
       << r.half_mode_ok << ',' << (r.exists ? num(r.max_cubic_re) : std::string("")) << ',' << r.agreement << '\n';
  }
}

}  // namespace

WorldState initial_world(const RunConfig& c) {
  switch (c.initial) {
    case InitialKind::Random:
      return random_world(c.n, c.seed, c.half_width, c.beacon);
    case InitialKind::Equilibrium: {
      const auto eq = leftmost_equilibrium(c.params, *c.m);
      if (!eq)
        throw PreconditionError("no counter-clockwise circling equilibrium on the all-(+1) branch at m=" +
                                std::to_string(*c.m));
      return equilibrium_world(*eq, c.beacon);
    }
    case InitialKind::Lift:
      return lift_world(manifold_spec(c.n, *c.k), c.kappa1, c.rho1, c.beacon);
  }
  return {};
}

CirclingSummary circling_summary(const Trajectory& traj, double window, double spread_tol, double kappa_tol) {
  CirclingSummary s;
  if (traj.samples.empty()) return s;
  const double t_end = traj.samples.back().t;
  std::vector<double> ranges;
  double err_pos = 0.0, err_neg = 0.0;
  for (const auto& w : traj.samples) {
    if (w.t < t_end - window - 1e-12) continue;
    const ShapeState sh = extract_shape(w);
    for (int i = 0; i < sh.n(); ++i) {
      ranges.push_back(sh.rho_b[i]);
      err_pos = std::max(err_pos, angle_distance(sh.kappa_b[i], kPi / 2));
      err_neg = std::max(err_neg, angle_distance(sh.kappa_b[i], -kPi / 2));
    }
  }
  double sum = 0.0;
  for (double r : ranges) sum += r;
  s.rho_b_mean = sum / ranges.size();
  double var = 0.0;
  for (double r : ranges) var += (r - s.rho_b_mean) * (r - s.rho_b_mean);
  s.rel_spread = std::sqrt(var / ranges.size()) / s.rho_b_mean;
  s.direction = err_pos <= err_neg ? 1 : -1;
  s.kappa_b_error = std::min(err_pos, err_neg);
  s.converged = s.rel_spread < spread_tol && s.kappa_b_error < kappa_tol;
  return s;
}

SpiralSummary spiral_summary(const Trajectory& traj, double transient) {
  SpiralSummary s;
  if (traj.samples.empty()) return s;
  const ShapeState first = extract_shape(traj.samples.front());
  const int n = first.n();
  std::vector<double> r0(n), rb0(n);
  for (int i = 0; i < n; ++i) {
    r0[i] = first.rho[i] / first.rho[0];
    rb0[i] = first.rho_b[i] / first.rho[0];
  }
  s.rho1_start = first.rho[0];
  s.rho1_increasing = true;
  double prev = -1.0;
  for (const auto& w : traj.samples) {
    const ShapeState sh = extract_shape(w);
    for (int i = 0; i < n; ++i) {
      s.ratio_drift = std::max({s.ratio_drift, std::abs(sh.rho[i] / sh.rho[0] - r0[i]),
                                std::abs(sh.rho_b[i] / sh.rho[0] - rb0[i])});
    }
    if (w.t >= transient) {
      if (prev >= 0.0 && !(sh.rho[0] > prev)) s.rho1_increasing = false;
      prev = sh.rho[0];
    }
    s.rho1_end = sh.rho[0];
    s.kappa1_end = sh.kappa[0];
  }
  return s;
}

TwoRouteSummary two_route(const WorldState& world0, const ControlParams& params, double duration, double dt,
                          int record_every) {
  SimulationOptions fo;
  fo.duration = duration;
  fo.dt = dt;
  fo.record_every = record_every;
  const Trajectory full = simulate(world0, params, fo);
  ShapeIntegrationOptions so;
  so.duration = duration;
  so.dt = dt;
  so.record_every = record_every;
  const ShapeTrajectory shape = integrate_shape(extract_shape(world0), params, so);
  if (full.samples.size() != shape.samples.size())
    throw NumericError("two-route comparison: sample counts differ (" + std::to_string(full.samples.size()) +
                       " vs " + std::to_string(shape.samples.size()) + ")");
  TwoRouteSummary s;
  for (std::size_t i = 0; i < full.samples.size(); ++i)
    s.max_deviation = std::max(s.max_deviation, shape_distance(extract_shape(full.samples[i]), shape.samples[i].shape));
  s.max_residual = shape.max_residual;
  return s;
}

RunResult run(const RunConfig& c) {
  Output out(c);
  switch (c.mode) {
    case RunMode::Simulate: run_simulate(c, out); break;
    case RunMode::ShapeSim: run_shape_sim(c, out); break;
    case RunMode::Equilibria: run_equilibria(c, out); break;
    case RunMode::Stability: run_stability(c, out); break;
    case RunMode::PureShape: run_pure_shape(c, out); break;
    case RunMode::Portrait: run_portrait(c, out); break;
    case RunMode::Sweep: run_sweep(c, out); break;
  }
  RunResult result;
  result.artifacts = out.artifacts;
  auto os = out.open("manifest.txt");
  os << "mode = " << to_string(c.mode) << "\n";
  os << "config_hash = " << hex64(c.hash()) << "\n";
  os << "seed = " << c.seed << "\n";
  for (const auto& a : result.artifacts) os << "artifact = " << a << "\n";
  result.artifacts.push_back("manifest.txt");
  return result;
}

}  // namespace pursuit
