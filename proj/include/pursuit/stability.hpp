#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pursuit/numerics.hpp"
#include "pursuit/types.hpp"

namespace pursuit {

// Linearisation data for the counter-clockwise circling equilibrium on the
// all-(+1) branch at winding m, with common speed, gains and offsets. All functions here reject
// heterogeneous parameters, sin(m pi / n) = 0 and non-existent equilibria
// with PreconditionError.

struct ABDCoefficients {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double alpha_star = 0.0;
  int m = 0;
};

struct QCoefficients {
  double q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0, q5 = 0.0;
};

// Per-agent blocks of the block-circulant Jacobian, in (rho, kappa, theta, rho_b, kappa_b) order.
struct BlockTriple {
  RealMatrix5 self{};    // agent i on itself
  RealMatrix5 ahead{}; // couples agent i to agent i+1
  RealMatrix5 behind{};  // couples agent i to agent i-1
  QCoefficients q;
};

// Coefficients of the cubic factor: tilde = real parts, hat = imaginary parts.
struct CubicCoefficients {
  int k = 0;
  double c_t = 0.0, c_h = 0.0;
  double d_t = 0.0, d_h = 0.0;
  double e_t = 0.0, e_h = 0.0;
};

ABDCoefficients abd(const ControlParams& params, int m);
BlockTriple block_triple(const ControlParams& params, int m);

// D_k = self + w^k ahead + w^-k behind with w = exp(2 pi j / n).
ComplexMatrix5 dk(const BlockTriple& blocks, int k, int n);

// Closed-form characteristic polynomial of D_k (degree 5).
ComplexPolynomial char_poly(const ControlParams& params, int m, int k);

CubicCoefficients cubic_coeffs(const ControlParams& params, int m, int k);

// x^3 + mu (c~ - j c^) x^2 + mu^2 a (d~ + j d^) x + mu^3 a^2 (e~ - j e^).
ComplexPolynomial cubic_factor(const ControlParams& params, int m, int k);

// (x^2 + mu^2 a^2) * cubic_factor: the factorised form of char_poly.
ComplexPolynomial factored_char_poly(const ControlParams& params, int m, int k);

struct RouthMode {
  int k = 0;
  CubicCoefficients cubic;
  double gamma = 0.0;
  double lambda_k = 0.0;
  std::array<double, 3> conditions{};
  std::array<bool, 3> pass{};
  bool condition3_vacuous = false;  // identically zero at k = 0
  bool ok = false;
};

struct RouthVerdict {
  std::vector<RouthMode> modes;
  bool necessary_ok = false;
  std::vector<std::string> notes;
};

RouthVerdict routh_necessary(const ControlParams& params, int m);

// Roots of the cubic factor for mode k. At k = 0 the factor carries a
// structural zero root (part of the constraint group); `drop_structural_zero`
// removes the root nearest zero there.
std::vector<cplx> cubic_roots(const ControlParams& params, int m, int k, bool drop_structural_zero);

// Cheap necessary conditions: positive damping coefficient b, and for even n
// the three sign conditions of the alternating (k = n/2) mode.
struct QuickChecks {
  double b = 0.0;
  bool damping_ok = false;
  bool half_mode_applicable = false;
  std::array<double, 3> half_mode_values{};
  bool half_mode_ok = true;
};

QuickChecks quick_checks(const ControlParams& params, int m);

enum class EigenGroup { Constraint, Informative };

struct SpectrumEntry {
  int k = 0;
  cplx value;
  EigenGroup group = EigenGroup::Informative;
  bool borderline = false;  // informative eigenvalue with |Re| inside the axis band
};

inline constexpr double kAxisBand = 1e-6;

struct SpectrumReport {
  std::vector<SpectrumEntry> entries;  // 5n entries ordered by k
  int constraint_count = 0;
  int informative_count = 0;
  int axis_count = 0;  // eigenvalues with |Re| < kAxisBand
  std::vector<std::string> diagnostics;

  std::vector<cplx> values() const;
  std::vector<cplx> informative() const;
};

SpectrumReport spectrum_report(const ControlParams& params, int m);

// Dense 5n x 5n block-circulant circ(self, ahead, 0, ..., 0, behind), row-major.
std::vector<double> assemble_block_circulant(const BlockTriple& blocks, int n);

void write_stability_report(std::ostream& os, const ControlParams& params, int m);
void write_spectrum_csv(std::ostream& os, const SpectrumReport& report);

}  // namespace pursuit
