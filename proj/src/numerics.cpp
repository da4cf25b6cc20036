#include "pursuit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pursuit/errors.hpp"

namespace pursuit {

namespace {

void check_finite(std::span<const double> v, const char* stage) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw NumericError(std::string("integration: non-finite derivative at index ") +
                         std::to_string(i) + " (" + stage + ")");
    }
  }
}

}  // namespace

Rk4Stepper::Rk4Stepper(std::size_t dim)
    : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

void Rk4Stepper::step(const Field& field, std::span<double> x, double dt) {
  const std::size_t n = x.size();
  if (n != k1_.size()) {
    k1_.assign(n, 0.0);
    k2_.assign(n, 0.0);
    k3_.assign(n, 0.0);
    k4_.assign(n, 0.0);
    tmp_.assign(n, 0.0);
  }
  field(x, k1_);
  check_finite(k1_, "stage 1");
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k1_[i];
  field(tmp_, k2_);
  check_finite(k2_, "stage 2");
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + 0.5 * dt * k2_[i];
  field(tmp_, k3_);
  check_finite(k3_, "stage 3");
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];
  field(tmp_, k4_);
  check_finite(k4_, "stage 4");
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
}

StateVector rk4_step(const Field& field, std::span<const double> state, double dt) {
  StateVector x(state.begin(), state.end());
  Rk4Stepper stepper(x.size());
  stepper.step(field, x, dt);
  return x;
}

double wrap_angle(double theta) {
  double r = std::fmod(theta + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

// ---------------------------------------------------------------------------
// Polynomials

ComplexPolynomial::ComplexPolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}

ComplexPolynomial ComplexPolynomial::from_roots(std::span<const cplx> roots) {
  std::vector<cplx> c{1.0};
  for (const cplx& r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  return ComplexPolynomial(std::move(c));
}

cplx ComplexPolynomial::operator()(cplx x) const {
  cplx acc = 0.0;
  for (const cplx& c : coeffs_) acc = acc * x + c;
  return acc;
}

cplx ComplexPolynomial::derivative_at(cplx x) const {
  cplx acc = 0.0;
  const int deg = degree();
  for (int i = 0; i < deg; ++i) {
    acc = acc * x + coeffs_[i] * static_cast<double>(deg - i);
  }
  return acc;
}

double ComplexPolynomial::max_coeff_magnitude() const {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

ComplexPolynomial ComplexPolynomial::operator*(const ComplexPolynomial& rhs) const {
  std::vector<cplx> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return ComplexPolynomial(std::move(out));
}

std::vector<cplx> poly_roots(const ComplexPolynomial& p) {
  const auto& raw = p.coeffs();
  if (raw.size() < 2) throw PreconditionError("poly_roots: degree must be >= 1");
  if (raw.front() == cplx(0.0)) throw PreconditionError("poly_roots: leading coefficient is zero");
  for (const cplx& c : raw) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw NumericError("poly_roots: non-finite coefficient");
  }

  const int n = p.degree();
  std::vector<cplx> a(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) a[i] = raw[i] / raw.front();
  const ComplexPolynomial monic(a);

  if (n == 1) return {-a[1]};

  // Fujiwara bound for the initial circle, centred on the root centroid.
  double radius = 0.0;
  for (int k = 1; k <= n; ++k) {
    double term = std::pow(std::abs(a[k]), 1.0 / k);
    if (k == n) term = std::pow(std::abs(a[k]) / 2.0, 1.0 / k);
    radius = std::max(radius, 2.0 * term);
  }
  const cplx centre = -a[1] / static_cast<double>(n);
  if (radius == 0.0) return std::vector<cplx>(n, cplx(0.0));

  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) {
    z[k] = centre + radius * std::polar(1.0, 2.0 * kPi * k / n + 0.4);
  }

  constexpr int kMaxIter = 2000;
  bool converged = false;
  for (int iter = 0; iter < kMaxIter && !converged; ++iter) {
    double max_step = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx pk = monic(z[k]);
      if (pk == cplx(0.0)) continue;
      const cplx ratio = pk / monic.derivative_at(z[k]);
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      }
      const cplx w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      z[k] -= w;
      max_step = std::max(max_step, std::abs(w) / (1.0 + std::abs(z[k])));
    }
    converged = max_step < 1e-15;
  }

  // Newton polish, accepted only when it reduces the residual.
  for (cplx& r : z) {
    for (int it = 0; it < 3; ++it) {
      const cplx d = monic.derivative_at(r);
      if (d == cplx(0.0)) break;
      const cplx cand = r - monic(r) / d;
      if (std::abs(monic(cand)) < std::abs(monic(r))) r = cand;
      else break;
    }
  }

  const double bound = 1e-9 * (1.0 + p.max_coeff_magnitude());
  for (const cplx& r : z) {
    if (!(std::abs(p(r)) < bound)) {
      throw NumericError("poly_roots: no convergence (residual " + std::to_string(std::abs(p(r))) +
                         ")");
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// 5x5 eigenvalues

ComplexPolynomial char_poly5(const ComplexMatrix5& m) {
  constexpr int n = 5;
  std::vector<cplx> c(n + 1, 0.0);  // c[0] = 1 (x^5) ... c[5] constant
  c[0] = 1.0;
  ComplexMatrix5 mk{};  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    ComplexMatrix5 next{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (int l = 0; l < n; ++l) acc += m[i][l] * mk[l][j];
        next[i][j] = acc + (i == j ? c[k - 1] : cplx(0.0));
      }
    mk = next;
    cplx tr = 0.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += m[i][l] * mk[l][i];
    c[k] = -tr / static_cast<double>(k);
  }
  return ComplexPolynomial(std::move(c));
}

std::array<cplx, 5> eig5(const ComplexMatrix5& m) {
  for (const auto& row : m)
    for (const cplx& v : row)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericError("eig5: non-finite matrix entry");
  const auto roots = poly_roots(char_poly5(m));
  std::array<cplx, 5> out{};
  std::copy(roots.begin(), roots.end(), out.begin());
  return out;
}

ComplexMatrix5 to_complex(const RealMatrix5& m) {
  ComplexMatrix5 out{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) out[i][j] = m[i][j];
  return out;
}

double multiset_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace pursuit
