#include "pursuit/pure_shape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "format.hpp"
#include "pursuit/errors.hpp"
#include "pursuit/numerics.hpp"

namespace pursuit {

namespace {

constexpr int kStride = 5;
constexpr double kHalfAngleBand = 1e-6;

void require_positive(const PureShapeState& s, const char* context) {
  const auto bad = [](double v) { return !(v > 0.0) || !std::isfinite(v); };
  std::string what;
  if (!(s.rho1 > kCollocationFloor)) what = "rho1 = " + detail::num(s.rho1);
  for (int i = 0; i < s.n() && what.empty(); ++i) {
    if (bad(s.rho_t[i])) what = "rho_t[" + std::to_string(i + 1) + "] = " + detail::num(s.rho_t[i]);
    else if (bad(s.rho_tb[i]))
      what = "rho_tb[" + std::to_string(i + 1) + "] = " + detail::num(s.rho_tb[i]);
  }
  if (!what.empty()) throw PreconditionError(std::string(context) + ": positivity breach, " + what);
}

void require_mode(int n, int k) {
  if (k < 1 || k > n - 1)
    throw PreconditionError("manifold index k=" + std::to_string(k) + " undefined for n=" +
                            std::to_string(n) + " (requires 1 <= k <= n-1)");
}

// Auxiliary half-angle products for pair (i, i+1):
//   sc = sin(Phi/2) cos(Psi/2) = (sin kappa_i + sin theta_{i+1}) / 2
//   cc = cos(Phi/2) cos(Psi/2) = (cos kappa_i + cos theta_{i+1}) / 2
struct PairTerms {
  std::vector<double> tail;   // sum_{j>=i} kappa_t_j, with tail[n] = 0
  std::vector<double> kplus;  // kappa_i + kappa_{i+1}
  std::vector<double> Phi, Psi, sc, cc;
};

PairTerms pair_terms(const PureShapeState& s) {
  const int n = s.n();
  PairTerms t;
  t.tail.assign(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) t.tail[i] = t.tail[i + 1] + s.kappa_t[i];
  t.kplus.resize(n);
  t.Phi.resize(n);
  t.Psi.resize(n);
  t.sc.resize(n);
  t.cc.resize(n);
  for (int i = 0; i < n; ++i) {
    const int nx = (i + 1) % n;
    t.kplus[i] = 2.0 * s.kappa1 + s.kappa_t[i] + 2.0 * t.tail[i + 1];
    t.Phi[i] = t.kplus[i] + s.psi[nx];
    t.Psi[i] = s.kappa_t[i] - s.psi[nx];
    t.sc[i] = std::sin(t.Phi[i] / 2.0) * std::cos(t.Psi[i] / 2.0);
    t.cc[i] = std::cos(t.Phi[i] / 2.0) * std::cos(t.Psi[i] / 2.0);
  }
  return t;
}

void wrap_relative(PureShapeState& s) {
  for (int i = 0; i < s.n(); ++i) {
    s.kappa_t[i] = wrap_angle(s.kappa_t[i]);
    s.psi[i] = wrap_angle(s.psi[i]);
    s.phi_b[i] = wrap_angle(s.phi_b[i]);
  }
}

struct Homog {
  double mu, lambda, alpha, alpha0, nu;
};

Homog homog(const ControlParams& p, const char* context) {
  p.validate();
  require_assumptions(p, true, true, true, true, context);
  return {p.mu.front(), p.lambda, p.alpha.front(), p.alpha0.front(), p.nu.front()};
}

ReducedStability classify_2x2(double j11, double j12, double j21, double j22) {
  const double tr = j11 + j22;
  const double det = j11 * j22 - j12 * j21;
  constexpr double band = 1e-7;
  if (det < -band || tr > band) return ReducedStability::Unstable;
  if (det > band && tr < -band) return ReducedStability::Stable;
  return ReducedStability::Marginal;
}

}  // namespace

PureShapeState PureShapeState::zeros(int n) {
  PureShapeState s;
  s.kappa_t.assign(n, 0.0);
  s.psi.assign(n, 0.0);
  s.phi_b.assign(n, 0.0);
  s.rho_t.assign(n, 0.0);
  s.rho_tb.assign(n, 0.0);
  return s;
}

std::vector<double> PureShapeState::to_vector() const {
  std::vector<double> v;
  v.reserve(2 + kStride * n());
  v.push_back(kappa1);
  v.push_back(rho1);
  for (int i = 0; i < n(); ++i) {
    v.push_back(kappa_t[i]);
    v.push_back(psi[i]);
    v.push_back(phi_b[i]);
    v.push_back(rho_t[i]);
    v.push_back(rho_tb[i]);
  }
  return v;
}

PureShapeState PureShapeState::from_vector(std::span<const double> v) {
  if (v.size() < 2 || (v.size() - 2) % kStride != 0)
    throw PreconditionError("pure-shape vector length " + std::to_string(v.size()) +
                            " is not 2 + 5n");
  const int n = static_cast<int>((v.size() - 2) / kStride);
  PureShapeState s = zeros(n);
  s.kappa1 = v[0];
  s.rho1 = v[1];
  for (int i = 0; i < n; ++i) {
    const std::size_t o = 2 + kStride * i;
    s.kappa_t[i] = v[o];
    s.psi[i] = v[o + 1];
    s.phi_b[i] = v[o + 2];
    s.rho_t[i] = v[o + 3];
    s.rho_tb[i] = v[o + 4];
  }
  return s;
}

PureShapeState to_pure_shape(const ShapeState& shape) {
  const int n = shape.n();
  if (!(shape.rho.front() > kCollocationFloor))
    throw PreconditionError("to_pure_shape: positivity breach, rho1 = " + detail::num(shape.rho.front()));
  PureShapeState s = PureShapeState::zeros(n);
  s.kappa1 = wrap_angle(shape.kappa.front());
  s.rho1 = shape.rho.front();
  for (int i = 0; i < n; ++i) {
    const int nx = (i + 1) % n;
    s.kappa_t[i] = wrap_angle(shape.kappa[i] - shape.kappa[nx]);
    s.psi[i] = wrap_angle(shape.theta[i] - shape.kappa[i]);
    s.phi_b[i] = wrap_angle(shape.kappa_b[i] - shape.kappa[i]);
    s.rho_t[i] = shape.rho[i] / s.rho1;
    s.rho_tb[i] = shape.rho_b[i] / s.rho1;
  }
  s.rho_t[0] = 1.0;
  return s;
}

ShapeState from_pure_shape(const PureShapeState& s) {
  const int n = s.n();
  ShapeState out = ShapeState::zeros(n);
  double tail = 0.0;
  std::vector<double> kappa(n);
  for (int i = n - 1; i >= 0; --i) {
    tail += s.kappa_t[i];
    kappa[i] = s.kappa1 + tail;
  }
  // kappa_1 is carried explicitly; the tail sum only fixes it mod 2pi.
  kappa[0] = s.kappa1;
  for (int i = 0; i < n; ++i) {
    out.kappa[i] = wrap_angle(kappa[i]);
    out.theta[i] = wrap_angle(kappa[i] + s.psi[i]);
    out.kappa_b[i] = wrap_angle(kappa[i] + s.phi_b[i]);
    out.rho[i] = s.rho1 * s.rho_t[i];
    out.rho_b[i] = s.rho1 * s.rho_tb[i];
  }
  return out;
}

double PureConstraintResiduals::max_abs() const {
  double m = std::max({std::abs(closure), std::abs(kappa_sum), std::abs(rho_t1)});
  for (double v : consistency_re) m = std::max(m, std::abs(v));
  for (double v : consistency_im) m = std::max(m, std::abs(v));
  return m;
}

PureConstraintResiduals pure_constraint_residuals(const PureShapeState& s) {
  const int n = s.n();
  PureConstraintResiduals r;
  double closure = 0.0, ksum = 0.0;
  for (int i = 0; i < n; ++i) {
    closure += kPi - s.psi[i];
    ksum += s.kappa_t[i];
  }
  r.closure = wrap_angle(closure);
  r.kappa_sum = wrap_angle(ksum);
  r.rho_t1 = s.rho_t.front() - 1.0;
  r.consistency_re.resize(n);
  r.consistency_im.resize(n);
  for (int i = 0; i < n; ++i) {
    const int nx = (i + 1) % n;
    const cplx rhs = s.rho_tb[i] * std::polar(1.0, s.phi_b[i]) +
                     s.rho_tb[nx] * std::polar(1.0, s.phi_b[nx] - s.psi[nx]);
    const cplx diff = cplx(s.rho_t[i], 0.0) - rhs;
    r.consistency_re[i] = diff.real();
    r.consistency_im[i] = diff.imag();
  }
  return r;
}

PureShapeState pure_shape_derivative(const PureShapeState& s, const ControlParams& params) {
  const Homog h = homog(params, "pure_shape_derivative");
  if (params.n() != s.n())
    throw PreconditionError("pure_shape_derivative: state has " + std::to_string(s.n()) +
                            " agents, parameters have " + std::to_string(params.n()));
  require_positive(s, "pure_shape_derivative");
  const int n = s.n();
  const double mu = h.mu, lam = h.lambda, al = h.alpha, a0 = h.alpha0;
  const double r1 = s.rho1;
  const PairTerms t = pair_terms(s);

  PureShapeState d = PureShapeState::zeros(n);
  d.kappa1 = -mu * ((1.0 - lam) * std::sin(s.kappa1 - al) +
                    lam * std::sin(s.phi_b[0] + s.kappa1 - a0)) +
             2.0 * lam * t.sc[0] / r1;
  d.rho1 = -2.0 * t.cc[0];

  for (int i = 0; i < n; ++i) {
    const int nx = (i + 1) % n;
    const int pv = (i + n - 1) % n;
    const double kt = s.kappa_t[i];
    d.kappa_t[i] =
        -2.0 * mu *
            ((1.0 - lam) * std::sin(kt / 2.0) * std::cos((t.kplus[i] - 2.0 * al) / 2.0) +
             lam * std::sin((s.phi_b[i] - s.phi_b[nx] + kt) / 2.0) *
                 std::cos((s.phi_b[i] + s.phi_b[nx] + t.kplus[i] - 2.0 * a0) / 2.0)) +
        (2.0 * lam / r1) * (t.sc[i] / s.rho_t[i] - t.sc[nx] / s.rho_t[nx]);
    d.rho_t[i] = (2.0 / r1) * (s.rho_t[i] * t.cc[0] - t.cc[i]);
    d.psi[i] = (2.0 / r1) * (t.sc[pv] / s.rho_t[pv] - t.sc[i] / s.rho_t[i]);
    const double kb = s.phi_b[i] + s.kappa1 + t.tail[i];
    d.rho_tb[i] = (2.0 * s.rho_tb[i] * t.cc[0] - std::cos(kb)) / r1;
    d.phi_b[i] = (std::sin(kb) / s.rho_tb[i] - 2.0 * t.sc[i] / s.rho_t[i]) / r1;
  }
  // rho_t_1 is identically one.
  d.rho_t[0] = 0.0;

  if (h.nu != 1.0) {
    std::vector<double> v = d.to_vector();
    for (double& x : v) x *= h.nu;
    d = PureShapeState::from_vector(v);
  }
  return d;
}

ManifoldSpec manifold_spec(int n, int k) {
  if (n < 2) throw PreconditionError("manifold_spec: n=" + std::to_string(n) + " < 2");
  require_mode(n, k);
  ManifoldSpec m;
  m.n = n;
  m.k = k;
  m.psi = wrap_angle((n - 2.0 * k) * kPi / n);
  m.phi_b = (n - 2.0 * k) * kPi / (2.0 * n);
  m.rho_tb = 1.0 / (2.0 * std::sin(k * kPi / n));
  return m;
}

double manifold_residual(const PureShapeState& s, const ManifoldSpec& spec) {
  if (s.n() != spec.n) return std::numeric_limits<double>::infinity();
  double r = 0.0;
  for (int i = 0; i < s.n(); ++i) {
    r = std::max(r, std::abs(wrap_angle(s.kappa_t[i])));
    r = std::max(r, std::abs(s.rho_t[i] - 1.0));
    r = std::max(r, angle_distance(s.psi[i], spec.psi));
    r = std::max(r, angle_distance(s.phi_b[i], spec.phi_b));
    r = std::max(r, std::abs(s.rho_tb[i] - spec.rho_tb));
  }
  return r;
}

PureShapeState lift(const ManifoldSpec& spec, double kappa1, double rho1) {
  if (!(rho1 > 0.0)) throw PreconditionError("lift: rho1 must be positive, got " + detail::num(rho1));
  PureShapeState s = PureShapeState::zeros(spec.n);
  s.kappa1 = kappa1;
  s.rho1 = rho1;
  std::fill(s.psi.begin(), s.psi.end(), spec.psi);
  std::fill(s.phi_b.begin(), s.phi_b.end(), spec.phi_b);
  std::fill(s.rho_t.begin(), s.rho_t.end(), 1.0);
  std::fill(s.rho_tb.begin(), s.rho_tb.end(), spec.rho_tb);
  return s;
}

WorldState lift_world(const ManifoldSpec& spec, double kappa1, double rho1, Vec2 beacon) {
  if (!(rho1 > 0.0))
    throw PreconditionError("lift_world: rho1 must be positive, got " + detail::num(rho1));
  const double radius = rho1 * spec.rho_tb;
  const double step = 2.0 * spec.k * kPi / spec.n;
  const double kappa_b = kappa1 + spec.phi_b;
  WorldState w;
  w.beacon = beacon;
  for (int i = 0; i < spec.n; ++i) {
    const double polar = i * step;
    const Vec2 radial{std::cos(polar), std::sin(polar)};
    AgentState a;
    a.r = beacon + radius * radial;
    a.x = rotate(-radial, -kappa_b);
    a.y = perp(a.x);
    w.agents.push_back(a);
  }
  return w;
}

ReducedRate reduced_derivative(double kappa1, double rho1, const ControlParams& params, int k) {
  const Homog h = homog(params, "reduced_derivative");
  require_mode(params.n(), k);
  if (!(rho1 > 0.0))
    throw PreconditionError("reduced_derivative: positivity breach, rho1 = " + detail::num(rho1));
  const double w = k * kPi / params.n();
  const double s = std::sin(w);
  ReducedRate r;
  r.dkappa1 = -h.mu * ((1.0 - h.lambda) * std::sin(kappa1 - h.alpha) +
                       h.lambda * std::cos(kappa1 - w - h.alpha0)) +
              (2.0 * h.lambda / rho1) * std::cos(kappa1 - w) * s;
  r.drho1 = -std::cos(kappa1) + std::cos(kappa1 - 2.0 * w);
  r.drho1_alt = 2.0 * std::sin(kappa1 - w) * s;
  r.dkappa1 *= h.nu;
  r.drho1 *= h.nu;
  r.drho1_alt *= h.nu;
  return r;
}

bool has_balanced_gains(const ControlParams& p) {
  constexpr double tol = 1e-12;
  const HomogeneityFlags f = HomogeneityFlags::of(p);
  return f.equal_gains && std::abs(p.lambda - 0.5) < tol && std::abs(p.mu.front() - 2.0) < tol;
}

ReducedParams reduced_params(const ControlParams& p, int k) {
  require_mode(p.n(), k);
  ReducedParams r;
  r.gamma_kn = (2.0 * k - p.n()) / (4.0 * p.n());
  r.alpha0_plus = (p.alpha0.front() + p.alpha.front()) / 2.0;
  r.alpha0_minus = (p.alpha0.front() - p.alpha.front()) / 2.0;
  return r;
}

std::optional<ReducedEquilibria> reduced_equilibrium(const ControlParams& params, int k) {
  const Homog h = homog(params, "reduced_equilibrium");
  require_mode(params.n(), k);
  const double w = k * kPi / params.n();
  const double denom = h.mu * ((1.0 - h.lambda) * std::sin(w - h.alpha) + h.lambda * std::cos(h.alpha0));
  if (!(denom > 0.0)) return std::nullopt;

  ReducedEquilibria eq;
  eq.rho1 = 2.0 * h.lambda * std::sin(w) / denom;
  eq.points = {{w, ReducedStability::Marginal}, {wrap_angle(w + kPi), ReducedStability::Marginal}};

  if (has_balanced_gains(params)) {
    const ReducedParams rp = reduced_params(params, k);
    eq.from_sign_test = true;
    eq.sign_product = std::sin(rp.gamma_kn * kPi - rp.alpha0_plus) *
                      std::cos(rp.gamma_kn * kPi + rp.alpha0_minus);
    if (eq.sign_product < -1e-12) {
      eq.points[0].stability = ReducedStability::Stable;
      eq.points[1].stability = ReducedStability::Unstable;
    } else if (eq.sign_product > 1e-12) {
      eq.points[0].stability = ReducedStability::Unstable;
      eq.points[1].stability = ReducedStability::Stable;
    }
    return eq;
  }

  for (auto& pt : eq.points) {
    const double hk = 1e-6, hr = 1e-6 * std::max(1.0, eq.rho1);
    const ReducedRate kp = reduced_derivative(pt.kappa1 + hk, eq.rho1, params, k);
    const ReducedRate km = reduced_derivative(pt.kappa1 - hk, eq.rho1, params, k);
    const ReducedRate rp = reduced_derivative(pt.kappa1, eq.rho1 + hr, params, k);
    const ReducedRate rm = reduced_derivative(pt.kappa1, eq.rho1 - hr, params, k);
    pt.stability = classify_2x2((kp.dkappa1 - km.dkappa1) / (2 * hk), (rp.dkappa1 - rm.dkappa1) / (2 * hr),
                                (kp.drho1 - km.drho1) / (2 * hk), (rp.drho1 - rm.drho1) / (2 * hr));
  }
  return eq;
}

InvariantRegion invariant_region_check(const ControlParams& params, int k) {
  const Homog h = homog(params, "invariant_region_check");
  require_mode(params.n(), k);
  const double w = k * kPi / params.n();
  InvariantRegion r;
  r.value = (1.0 - h.lambda) * std::sin(w - h.alpha) + h.lambda * std::cos(h.alpha0);
  r.holds = r.value <= 0.0;
  r.kappa_lo = w;
  r.kappa_hi = w + kPi;
  return r;
}

bool in_region(const InvariantRegion& region, double kappa1, double rho1) {
  if (!(rho1 > 0.0)) return false;
  double d = std::fmod(kappa1 - region.kappa_lo, 2.0 * kPi);
  if (d < 0.0) d += 2.0 * kPi;
  return d > 0.0 && d < kPi;
}

AsymptotePrediction asymptote_prediction(const ControlParams& params, int k) {
  if (!has_balanced_gains(params))
    throw PreconditionError("asymptote_prediction: requires lambda = 1/2 and mu = 2");
  const InvariantRegion region = invariant_region_check(params, k);
  if (!region.holds)
    throw PreconditionError("asymptote_prediction: invariant-region condition fails (value " +
                            detail::num(region.value) + " > 0)");
  const ReducedParams rp = reduced_params(params, k);
  AsymptotePrediction a;
  a.cos_term = std::cos(rp.gamma_kn * kPi + rp.alpha0_minus);
  if (std::abs(a.cos_term) < 1e-9) return a;
  a.conclusive = true;
  a.kappa1 = wrap_angle(rp.gamma_kn * kPi + rp.alpha0_plus + (a.cos_term > 0.0 ? 0.0 : kPi));
  return a;
}

std::vector<ReducedSample> integrate_reduced(double kappa1, double rho1, const ControlParams& params,
                                             int k, double duration, double dt, int record_every) {
  if (!(dt > 0.0) || !(duration >= 0.0))
    throw PreconditionError("integrate_reduced: need dt > 0 and duration >= 0");
  record_every = std::max(1, record_every);
  double t = 0.0;
  const Field field = [&](std::span<const double> x, std::span<double> out) {
    if (!(x[1] > kCollocationFloor))
      throw CollisionError(t, 0, 1, "integrate_reduced: rho1 collapsed near t=" + detail::num(t));
    const ReducedRate r = reduced_derivative(x[0], x[1], params, k);
    out[0] = r.dkappa1;
    out[1] = r.drho1;
  };
  const long steps = std::lround(duration / dt);
  Rk4Stepper stepper(2);
  std::array<double, 2> x{kappa1, rho1};
  std::vector<ReducedSample> out{{0.0, kappa1, rho1}};
  for (long s = 1; s <= steps; ++s) {
    t = (s - 1) * dt;
    stepper.step(field, x, dt);
    t = s * dt;
    if (!(x[1] > kCollocationFloor))
      throw CollisionError(t, 0, 1, "integrate_reduced: rho1 collapsed at t=" + detail::num(t));
    if (s % record_every == 0 || s == steps) out.push_back({t, x[0], x[1]});
  }
  return out;
}

std::vector<PureShapeSample> integrate_pure_shape(const PureShapeState& state0, const ControlParams& params,
                                                  double duration, double dt, int record_every) {
  if (!(dt > 0.0) || !(duration >= 0.0))
    throw PreconditionError("integrate_pure_shape: need dt > 0 and duration >= 0");
  record_every = std::max(1, record_every);
  double t = 0.0;
  const Field field = [&](std::span<const double> x, std::span<double> out) {
    // A stage that pushes the scale through zero is a collapse, not a bad input.
    if (!(x[1] > kCollocationFloor))
      throw CollisionError(t, 0, 1, "integrate_pure_shape: rho1 collapsed near t=" + detail::num(t));
    const std::vector<double> d = pure_shape_derivative(PureShapeState::from_vector(x), params).to_vector();
    std::copy(d.begin(), d.end(), out.begin());
  };
  std::vector<double> x = state0.to_vector();
  Rk4Stepper stepper(x.size());
  const long steps = std::lround(duration / dt);
  std::vector<PureShapeSample> out{{0.0, state0}};
  for (long s = 1; s <= steps; ++s) {
    t = (s - 1) * dt;
    stepper.step(field, x, dt);
    PureShapeState st = PureShapeState::from_vector(x);
    wrap_relative(st);
    x = st.to_vector();
    if (s % record_every == 0 || s == steps) out.push_back({s * dt, std::move(st)});
  }
  return out;
}

HalfAngleGuard half_angle_guard(const PureShapeState& s) {
  const PairTerms t = pair_terms(s);
  HalfAngleGuard g;
  g.min_cos_half_phi = g.min_cos_half_psi = g.min_sin_half_phi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.n(); ++i) {
    g.min_cos_half_phi = std::min(g.min_cos_half_phi, std::abs(std::cos(t.Phi[i] / 2.0)));
    g.min_cos_half_psi = std::min(g.min_cos_half_psi, std::abs(std::cos(t.Psi[i] / 2.0)));
    g.min_sin_half_phi = std::min(g.min_sin_half_phi, std::abs(std::sin(t.Phi[i] / 2.0)));
  }
  g.flagged = g.min_cos_half_phi < kHalfAngleBand || g.min_cos_half_psi < kHalfAngleBand || g.min_sin_half_phi < kHalfAngleBand;
  return g;
}

PhasePortrait phase_portrait(const ControlParams& params, int k, const PortraitGrid& grid,
                             const std::vector<std::pair<double, double>>& seeds, double duration,
                             double dt, int record_every) {
  if (grid.kappa_samples < 1 || grid.rho_samples < 1)
    throw PreconditionError("phase_portrait: grid needs at least one sample per axis");
  if (!(grid.kappa_min > -kPi - 1e-12) || grid.kappa_max > kPi + 1e-12 || grid.kappa_min > grid.kappa_max)
    throw PreconditionError("phase_portrait: kappa1 grid must lie within (-pi, pi]");
  if (!(grid.rho_min > 0.0) || grid.rho_max < grid.rho_min)
    throw PreconditionError("phase_portrait: rho1 grid must lie within (0, rho_max]");

  PhasePortrait out;
  out.grid.reserve(static_cast<std::size_t>(grid.kappa_samples) * grid.rho_samples);
  const auto lin = [](double lo, double hi, int count, int i) {
    return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  };
  for (int ir = 0; ir < grid.rho_samples; ++ir) {
    const double rho = lin(grid.rho_min, grid.rho_max, grid.rho_samples, ir);
    for (int ik = 0; ik < grid.kappa_samples; ++ik) {
      const double kap = lin(grid.kappa_min, grid.kappa_max, grid.kappa_samples, ik);
      const ReducedRate r = reduced_derivative(kap, rho, params, k);
      out.grid.push_back({kap, rho, r.dkappa1, r.drho1});
    }
  }
  for (const auto& [kap, rho] : seeds)
    out.trajectories.push_back(integrate_reduced(kap, rho, params, k, duration, dt, record_every));
  return out;
}

void write_portrait_grid_csv(std::ostream& os, const PhasePortrait& portrait) {
  using detail::num;
  os << "kappa1,rho1,dkappa1,drho1\n";
  for (const auto& g : portrait.grid)
    os << num(g.kappa1) << ',' << num(g.rho1) << ',' << num(g.dkappa1) << ',' << num(g.drho1) << '\n';
}

void write_reduced_trajectory_csv(std::ostream& os, const std::vector<ReducedSample>& traj) {
  using detail::num;
  os << "t,kappa1,kappa1_wrapped,rho1\n";
  for (const auto& s : traj)
    os << num(s.t) << ',' << num(s.kappa1) << ',' << num(wrap_angle(s.kappa1)) << ',' << num(s.rho1) << '\n';
}

const char* to_string(ReducedStability s) {
  switch (s) {
    case ReducedStability::Stable: return "stable";
    case ReducedStability::Unstable: return "unstable";
    case ReducedStability::Marginal: return "marginal";
  }
  return "?";
}

}  // namespace pursuit
