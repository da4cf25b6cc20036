#include "pursuit/types.hpp"

#include <algorithm>

#include "pursuit/errors.hpp"

namespace pursuit {

namespace {

bool all_equal(const std::vector<double>& v, double tol = 1e-12) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return std::abs(x - v.front()) <= tol; });
}

}  // namespace

ControlParams ControlParams::homogeneous(int n, double mu, double lambda, double alpha,
                                         double alpha0, double nu) {
  ControlParams p;
  p.lambda = lambda;
  p.mu.assign(n, mu);
  p.mu_b.assign(n, mu);
  p.alpha.assign(n, alpha);
  p.alpha0.assign(n, alpha0);
  p.nu.assign(n, nu);
  return p;
}

void ControlParams::validate() const {
  const std::size_t n = alpha.size();
  if (n < 2) throw PreconditionError("params: need at least 2 agents");
  if (mu.size() != n || mu_b.size() != n || alpha0.size() != n || nu.size() != n)
    throw PreconditionError("params: per-agent vectors must all have length n");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw PreconditionError("params: lambda must lie in the open interval (0,1)");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mu[i] > 0.0) || !(mu_b[i] > 0.0))
      throw PreconditionError("params: gains must be positive (agent " + std::to_string(i + 1) + ")");
    if (!(nu[i] > 0.0))
      throw PreconditionError("params: speeds must be positive (agent " + std::to_string(i + 1) + ")");
    if (!std::isfinite(alpha[i]) || !std::isfinite(alpha0[i]))
      throw PreconditionError("params: non-finite bearing offset");
  }
}

HomogeneityFlags HomogeneityFlags::of(const ControlParams& p) {
  HomogeneityFlags f;
  if (p.alpha.empty()) return f;
  f.equal_speed = all_equal(p.nu);
  std::vector<double> gains = p.mu;
  gains.insert(gains.end(), p.mu_b.begin(), p.mu_b.end());
  f.equal_gains = all_equal(gains);
  f.common_alpha0 = all_equal(p.alpha0);
  f.common_alpha = all_equal(p.alpha);
  return f;
}

void require_assumptions(const ControlParams& p, bool a1, bool a2, bool a3, bool a4,
                         const std::string& context) {
  p.validate();
  const auto f = HomogeneityFlags::of(p);
  std::string failed;
  auto add = [&](bool need, bool have, const char* name) {
    if (need && !have) failed += failed.empty() ? name : std::string(", ") + name;
  };
  add(a1, f.equal_speed, "equal speeds");
  add(a2, f.equal_gains, "common gains");
  add(a3, f.common_alpha0, "common beacon offset");
  add(a4, f.common_alpha, "common neighbour offset");
  if (!failed.empty()) throw PreconditionError(context + ": assumption violated: " + failed);
}

ShapeState ShapeState::zeros(int n) {
  ShapeState s;
  s.rho.assign(n, 0.0);
  s.kappa.assign(n, 0.0);
  s.theta.assign(n, 0.0);
  s.rho_b.assign(n, 0.0);
  s.kappa_b.assign(n, 0.0);
  return s;
}

std::vector<double> ShapeState::to_vector() const {
  std::vector<double> v;
  v.reserve(5 * rho.size());
  for (int i = 0; i < n(); ++i) {
    v.push_back(rho[i]);
    v.push_back(kappa[i]);
    v.push_back(theta[i]);
    v.push_back(rho_b[i]);
    v.push_back(kappa_b[i]);
  }
  return v;
}

ShapeState ShapeState::from_vector(std::span<const double> v) {
  const int n = static_cast<int>(v.size() / 5);
  ShapeState s = zeros(n);
  for (int i = 0; i < n; ++i) {
    s.rho[i] = v[5 * i];
    s.kappa[i] = v[5 * i + 1];
    s.theta[i] = v[5 * i + 2];
    s.rho_b[i] = v[5 * i + 3];
    s.kappa_b[i] = v[5 * i + 4];
  }
  return s;
}

}  // namespace pursuit
