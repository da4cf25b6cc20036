#include "pursuit/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "format.hpp"
#include "pursuit/errors.hpp"

namespace pursuit {

namespace {

struct ModeAngles {
  double s = 0.0;  // sin(k pi / n)
  double c = 0.0;  // cos(k pi / n)
};

ModeAngles mode_angles(int k, int n) {
  const double phi = kPi * k / n;
  return {std::sin(phi), std::cos(phi)};
}

double cot(double x) { return std::cos(x) / std::sin(x); }

void require_mode(int k, int n) {
  if (k < 0 || k >= n)
    throw PreconditionError("mode index k=" + std::to_string(k) + " outside [0, n)");
}

cplx omega_pow(int k, int n) { return std::polar(1.0, 2.0 * kPi * k / n); }

}  // namespace

ABDCoefficients abd(const ControlParams& p, int m) {
  require_assumptions(p, true, true, true, true, "stability");
  const int n = p.n();
  const double phase = kPi * m / n;
  const double s = std::sin(phase);
  if (std::abs(s) < 1e-12)
    throw PreconditionError("stability: singular mode, sin(m pi / n) = 0 for m=" + std::to_string(m));
  const double lam = p.lambda;
  ABDCoefficients r;
  r.m = m;
  r.alpha_star = phase - p.alpha.front();
  r.a = std::cos(p.alpha0.front()) + (1.0 / lam - 1.0) * std::sin(r.alpha_star);
  r.b = lam * std::sin(p.alpha0.front()) + (1.0 - lam) * std::cos(r.alpha_star);
  r.d = r.a + (1.0 - lam) * std::cos(r.alpha_star) * cot(phase);
  if (!(r.a > 0.0))
    throw PreconditionError("stability: no counter-clockwise equilibrium at m=" + std::to_string(m) +
                            " (a = " + detail::num(r.a) + " <= 0)");
  if (!(s > 0.0))
    throw PreconditionError("stability: no counter-clockwise equilibrium at m=" + std::to_string(m) +
                            " (sin(m pi / n) < 0 gives negative inter-agent range)");
  return r;
}

BlockTriple block_triple(const ControlParams& p, int m) {
  const ABDCoefficients c = abd(p, m);
  const int n = p.n();
  const double mu = p.mu.front();
  const double lam = p.lambda;
  const double phase = kPi * m / n;
  const double s = std::sin(phase);

  BlockTriple bt;
  auto& q = bt.q;
  q.q1 = mu * mu / 2.0 * c.a * c.a / s;
  q.q2 = mu / 2.0 * c.a * cot(phase);
  q.q3 = mu * (1.0 - lam) * std::cos(c.alpha_star);
  q.q4 = -2.0 * q.q1 * s;
  q.q5 = -mu * lam * std::sin(p.alpha0.front());

  auto& self = bt.self;
  self[0] = {0.0, s, 0.0, 0.0, 0.0};
  self[1] = {-lam * q.q1, lam * q.q2 - q.q3, 0.0, 0.0, q.q5};
  self[2] = {(1.0 - lam) * q.q1, -(1.0 - lam) * q.q2 - q.q3, -q.q2, 0.0, q.q5};
  self[3] = {0.0, 0.0, 0.0, 0.0, 1.0};
  self[4] = {(1.0 - lam) * q.q1, -(1.0 - lam) * q.q2 - q.q3, 0.0, q.q4, q.q5};

  // The ahead block is non-zero only in its third column (dependence on theta_{i+1}).
  const std::array<double, 5> col{s, -lam * q.q2, (1.0 - lam) * q.q2, 0.0, (1.0 - lam) * q.q2};
  for (int r = 0; r < 5; ++r) bt.ahead[r][2] = col[r];

  // The behind block is non-zero only in its third row (theta_i depends on agent i-1).
  bt.behind[2] = {-q.q1, q.q2, 0.0, 0.0, 0.0};
  return bt;
}

ComplexMatrix5 dk(const BlockTriple& b, int k, int n) {
  require_mode(k, n);
  const cplx w = omega_pow(k, n);
  const cplx wi = std::conj(w);
  ComplexMatrix5 out{};
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) out[r][c] = b.self[r][c] + w * b.ahead[r][c] + wi * b.behind[r][c];
  return out;
}

ComplexPolynomial char_poly(const ControlParams& p, int m, int k) {
  const ABDCoefficients c = abd(p, m);
  const int n = p.n();
  require_mode(k, n);
  const double mu = p.mu.front();
  const double lam = p.lambda;
  const double ct = cot(kPi * m / n);
  const cplx w = omega_pow(k, n);
  const cplx one_minus = 1.0 - w;
  const cplx one_plus = 1.0 + w;
  const double a = c.a, b = c.b, d = c.d, ca = std::cos(c.alpha_star);

  std::vector<cplx> co(6);
  co[0] = 1.0;
  co[1] = mu * (b + (a / 2.0) * (1.0 - lam) * one_minus * ct);
  co[2] = (mu * mu * a / 2.0) * (2.0 * a + one_minus * d + lam * a * one_plus);
  co[3] = (std::pow(mu, 3) * a * a / 2.0) * (1.0 - lam) * one_minus * (ca + a * ct) +
          std::pow(mu, 3) * a * a * b;
  co[4] = (std::pow(mu, 4) * std::pow(a, 3) / 2.0) * (one_minus * d + lam * a * one_plus);
  co[5] = (std::pow(mu, 5) * std::pow(a, 4) / 2.0) * one_minus * (1.0 - lam) * ca;
  return ComplexPolynomial(std::move(co));
}

CubicCoefficients cubic_coeffs(const ControlParams& p, int m, int k) {
  const ABDCoefficients c = abd(p, m);
  const int n = p.n();
  require_mode(k, n);
  const double lam = p.lambda;
  const double ct = cot(kPi * m / n);
  const auto [s, co] = mode_angles(k, n);
  const double ca = std::cos(c.alpha_star);
  CubicCoefficients r;
  r.k = k;
  r.c_t = c.b + c.a * (1.0 - lam) * s * s * ct;
  r.c_h = c.a * (1.0 - lam) * s * co * ct;
  r.d_t = c.d * s * s + lam * c.a * co * co;
  r.d_h = (lam * c.a - c.d) * s * co;
  r.e_t = (1.0 - lam) * ca * s * s;
  r.e_h = (1.0 - lam) * ca * s * co;
  return r;
}

ComplexPolynomial cubic_factor(const ControlParams& p, int m, int k) {
  const ABDCoefficients c = abd(p, m);
  const CubicCoefficients q = cubic_coeffs(p, m, k);
  const double mu = p.mu.front();
  const cplx j(0.0, 1.0);
  return ComplexPolynomial({1.0, mu * (q.c_t - j * q.c_h), mu * mu * c.a * (q.d_t + j * q.d_h),
                            std::pow(mu, 3) * c.a * c.a * (q.e_t - j * q.e_h)});
}

ComplexPolynomial factored_char_poly(const ControlParams& p, int m, int k) {
  const ABDCoefficients c = abd(p, m);
  const double mu = p.mu.front();
  const ComplexPolynomial quad({1.0, 0.0, mu * mu * c.a * c.a});
  return quad * cubic_factor(p, m, k);
}

RouthVerdict routh_necessary(const ControlParams& p, int m) {
  const ABDCoefficients c = abd(p, m);
  const int n = p.n();
  const double a = c.a;
  RouthVerdict v;
  v.necessary_ok = true;
  for (int k = 0; k < n; ++k) {
    RouthMode md;
    md.k = k;
    md.cubic = cubic_coeffs(p, m, k);
    const auto& q = md.cubic;
    md.gamma = q.c_t * (q.c_t * q.d_t - q.c_h * q.d_h) - a * (q.d_h * q.d_h + q.c_t * q.e_t);
    md.lambda_k = q.c_t * (q.c_h * q.e_t - q.c_t * q.e_h) + a * q.d_h * q.e_t;
    md.conditions[0] = q.c_t;
    md.conditions[1] = q.c_t * (q.c_t * q.d_t - a * q.e_t) - q.d_h * (q.c_t * q.c_h + a * q.d_h);
    md.conditions[2] = md.gamma * md.gamma * q.e_t + md.gamma * md.lambda_k * q.d_h -
                       md.lambda_k * md.lambda_k * q.c_t;
    md.condition3_vacuous = (k == 0);
    for (int i = 0; i < 3; ++i) md.pass[i] = md.conditions[i] > 0.0;
    if (md.condition3_vacuous) md.pass[2] = true;
    md.ok = md.pass[0] && md.pass[1] && md.pass[2];
    v.necessary_ok = v.necessary_ok && md.ok;
    v.modes.push_back(md);
  }
  v.notes.push_back(
      "k=0: third condition is identically zero (structural zero root); treated as vacuous");
  return v;
}

std::vector<cplx> cubic_roots(const ControlParams& p, int m, int k, bool drop_structural_zero) {
  std::vector<cplx> roots = poly_roots(cubic_factor(p, m, k));
  if (k == 0 && drop_structural_zero) {
    auto it = std::min_element(roots.begin(), roots.end(),
                               [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
    roots.erase(it);
  }
  return roots;
}

QuickChecks quick_checks(const ControlParams& p, int m) {
  const ABDCoefficients c = abd(p, m);
  const int n = p.n();
  const double lam = p.lambda;
  const double ct = cot(kPi * m / n);
  const double ca = std::cos(c.alpha_star);
  QuickChecks r;
  r.b = c.b;
  r.damping_ok = c.b > 0.0;
  r.half_mode_applicable = n % 2 == 0;
  if (r.half_mode_applicable) {
    r.half_mode_values = {ca, lam * std::sin(p.alpha0.front()) + (1.0 - lam) * (ca + c.a * ct),
                           c.b * c.d + c.a * (1.0 - lam) * (c.d * ct - ca)};
    r.half_mode_ok = std::all_of(r.half_mode_values.begin(), r.half_mode_values.end(),
                               [](double x) { return x > 0.0; });
  }
  return r;
}

std::vector<cplx> SpectrumReport::values() const {
  std::vector<cplx> v;
  for (const auto& e : entries) v.push_back(e.value);
  return v;
}

std::vector<cplx> SpectrumReport::informative() const {
  std::vector<cplx> v;
  for (const auto& e : entries)
    if (e.group == EigenGroup::Informative) v.push_back(e.value);
  return v;
}

SpectrumReport spectrum_report(const ControlParams& p, int m) {
  const ABDCoefficients c = abd(p, m);
  const BlockTriple bt = block_triple(p, m);
  const int n = p.n();
  const double mu = p.mu.front();
  const cplx axis_root(0.0, mu * c.a);

  SpectrumReport rep;
  for (int k = 0; k < n; ++k) {
    const auto eig = eig5(dk(bt, k, n));
    std::array<bool, 5> taken{};
    auto claim = [&](cplx target) {
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 5; ++i) {
        if (taken[i]) continue;
        const double dist = std::abs(eig[i] - target);
        if (dist < best_d) {
          best_d = dist;
          best = i;
        }
      }
      taken[best] = true;
    };
    claim(axis_root);
    claim(std::conj(axis_root));
    if (k == 0) claim(0.0);
    for (int i = 0; i < 5; ++i) {
      SpectrumEntry e;
      e.k = k;
      e.value = eig[i];
      e.group = taken[i] ? EigenGroup::Constraint : EigenGroup::Informative;
      const bool on_axis = std::abs(eig[i].real()) < kAxisBand;
      if (on_axis) ++rep.axis_count;
      if (e.group == EigenGroup::Constraint) {
        ++rep.constraint_count;
        if (!on_axis)
          rep.diagnostics.push_back("mode k=" + std::to_string(k) +
                                    ": constraint eigenvalue off the imaginary axis (Re = " +
                                    detail::num(eig[i].real()) + ")");
      } else {
        ++rep.informative_count;
        e.borderline = on_axis;
        if (on_axis)
          rep.diagnostics.push_back("mode k=" + std::to_string(k) +
                                    ": informative eigenvalue inside the axis band (Re = " +
                                    detail::num(eig[i].real()) + ")");
      }
      rep.entries.push_back(e);
    }
  }
  if (rep.axis_count != 2 * n + 1)
    rep.diagnostics.push_back("imaginary-axis count " + std::to_string(rep.axis_count) +
                              " differs from expected " + std::to_string(2 * n + 1));
  return rep;
}

std::vector<double> assemble_block_circulant(const BlockTriple& b, int n) {
  const int dim = 5 * n;
  std::vector<double> out(static_cast<std::size_t>(dim) * dim, 0.0);
  auto add_block = [&](int row_blk, int col_blk, const RealMatrix5& blk) {
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c)
        out[static_cast<std::size_t>(5 * row_blk + r) * dim + 5 * col_blk + c] += blk[r][c];
  };
  for (int i = 0; i < n; ++i) {
    add_block(i, i, b.self);
    add_block(i, (i + 1) % n, b.ahead);
    add_block(i, (i + n - 1) % n, b.behind);
  }
  return out;
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& rep) {
  os << "k,re,im,group,borderline\n";
  for (const auto& e : rep.entries) {
    os << e.k << ',' << detail::num(e.value.real()) << ',' << detail::num(e.value.imag()) << ','
       << (e.group == EigenGroup::Constraint ? "constraint" : "informative") << ','
       << (e.borderline ? 1 : 0) << '\n';
  }
}

void write_stability_report(std::ostream& os, const ControlParams& p, int m) {
  using detail::angle;
  using detail::num;
  const ABDCoefficients c = abd(p, m);
  const BlockTriple bt = block_triple(p, m);
  const RouthVerdict v = routh_necessary(p, m);
  const QuickChecks cr = quick_checks(p, m);
  const SpectrumReport sp = spectrum_report(p, m);

  os << "# stability report: counter-clockwise circling equilibrium, all-(+1) branch\n";
  os << "n = " << p.n() << "\nm = " << m << "\n";
  os << "alpha_star = " << angle(c.alpha_star) << "\n";
  os << "a = " << num(c.a) << "\nb = " << num(c.b) << "\nd = " << num(c.d) << "\n";
  os << "q = " << num(bt.q.q1) << ' ' << num(bt.q.q2) << ' ' << num(bt.q.q3) << ' '
     << num(bt.q.q4) << ' ' << num(bt.q.q5) << "\n";
  for (const auto& md : v.modes) {
    const auto& q = md.cubic;
    os << "\n[mode " << md.k << "]\n";
    os << "cubic = c~ " << num(q.c_t) << ", c^ " << num(q.c_h) << ", d~ " << num(q.d_t) << ", d^ "
       << num(q.d_h) << ", e~ " << num(q.e_t) << ", e^ " << num(q.e_h) << "\n";
    os << "Gamma = " << num(md.gamma) << "\nLambda = " << num(md.lambda_k) << "\n";
    for (int i = 0; i < 3; ++i) {
      os << "condition" << i + 1 << " = " << num(md.conditions[i])
         << (i == 2 && md.condition3_vacuous ? " (vacuous)" : (md.pass[i] ? " (pass)" : " (FAIL)"))
         << "\n";
    }
    os << "cubic_roots =";
    for (const cplx& r : cubic_roots(p, m, md.k, false))
      os << ' ' << num(r.real()) << (r.imag() < 0 ? "-" : "+") << num(std::abs(r.imag())) << "j";
    os << "\n";
  }
  os << "\n[spectrum]\n";
  os << "constraint_count = " << sp.constraint_count << " (expected " << 2 * p.n() + 1 << ")\n";
  os << "informative_count = " << sp.informative_count << " (expected " << 3 * p.n() - 1 << ")\n";
  os << "axis_count = " << sp.axis_count << "\n";
  for (const auto& d : sp.diagnostics) os << "diagnostic = " << d << "\n";
  os << "\n[quick checks]\n";
  os << "damping_b = " << num(cr.b) << (cr.damping_ok ? " (pass)" : " (FAIL)") << "\n";
  if (cr.half_mode_applicable) {
    os << "half_mode = " << num(cr.half_mode_values[0]) << ' ' << num(cr.half_mode_values[1])
       << ' ' << num(cr.half_mode_values[2]) << (cr.half_mode_ok ? " (pass)" : " (FAIL)") << "\n";
  }
  os << "\n[verdict]\n";
  for (const auto& note : v.notes) os << "note = " << note << "\n";
  os << "necessary_conditions = " << (v.necessary_ok ? "pass" : "fail") << "\n";
}

}  // namespace pursuit
