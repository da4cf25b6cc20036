#pragma once

#include <array>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace pursuit {

using cplx = std::complex<double>;
using StateVector = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;

// Vector field evaluated in place: writes dx/dt for state x into `out`
// (out.size() == x.size()).
using Field = std::function<void(std::span<const double> x, std::span<double> out)>;

// Classical fourth-order Runge-Kutta step. Throws NumericError naming the
// first non-finite derivative component.
StateVector rk4_step(const Field& field, std::span<const double> state, double dt);

// Reusable RK4 stepper; holds the stage buffers so a long run allocates once.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t dim);
  void step(const Field& field, std::span<double> state, double dt);
  std::size_t dim() const { return k1_.size(); }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

// Wrap to (-pi, pi].
double wrap_angle(double theta);

// Shortest signed distance between two angles, in [0, pi].
double angle_distance(double a, double b);

// Coefficients are stored highest degree first.
class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<cplx> coeffs);

  static ComplexPolynomial from_roots(std::span<const cplx> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator()(cplx x) const;
  cplx derivative_at(cplx x) const;
  double max_coeff_magnitude() const;

  ComplexPolynomial operator*(const ComplexPolynomial& rhs) const;

 private:
  std::vector<cplx> coeffs_;
};

// All roots (with multiplicity) by Aberth-Ehrlich simultaneous iteration,
// followed by a Newton polish. Throws NumericError if the iteration cap is
// hit without meeting the residual bound.
std::vector<cplx> poly_roots(const ComplexPolynomial& p);

using ComplexMatrix5 = std::array<std::array<cplx, 5>, 5>;
using RealMatrix5 = std::array<std::array<double, 5>, 5>;

// det(xI - m) via Faddeev-LeVerrier.
ComplexPolynomial char_poly5(const ComplexMatrix5& m);

std::array<cplx, 5> eig5(const ComplexMatrix5& m);

ComplexMatrix5 to_complex(const RealMatrix5& m);

// Distance between two complex multisets of equal size under a greedy
// closest-pair matching: the largest matched |a_i - b_j|. Returns +inf when
// the sizes differ.
double multiset_distance(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace pursuit
