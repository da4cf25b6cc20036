#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace pursuit {

// Agents closer than this to their pursued neighbour or to the beacon are
// treated as collocated; steering and shape variables are undefined there.
inline constexpr double kCollocationFloor = 1e-6;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }  // +pi/2 rotation
// Signed angle that rotates `from` onto `to`, in (-pi, pi].
inline double angle_between(Vec2 from, Vec2 to) { return std::atan2(cross(from, to), dot(from, to)); }

// System and controller parameters. Per-agent vectors all have length n.
struct ControlParams {
  double lambda = 0.5;
  std::vector<double> mu;      // gain toward the pursued neighbour
  std::vector<double> mu_b;    // gain toward the beacon
  std::vector<double> alpha;   // bearing offset to neighbour (rad)
  std::vector<double> alpha0;  // bearing offset to beacon (rad)
  std::vector<double> nu;      // speed

  int n() const { return static_cast<int>(alpha.size()); }

  static ControlParams homogeneous(int n, double mu, double lambda, double alpha, double alpha0,
                                   double nu = 1.0);

  // Throws PreconditionError on size mismatch, lambda outside (0,1),
  // non-positive gains or speeds, or n < 2.
  void validate() const;
};

struct HomogeneityFlags {
  bool equal_speed = false;
  bool equal_gains = false;
  bool common_alpha0 = false;
  bool common_alpha = false;

  static HomogeneityFlags of(const ControlParams& p);
};

// Throws PreconditionError naming every failed assumption among the requested ones.
void require_assumptions(const ControlParams& p, bool a1, bool a2, bool a3, bool a4,
                         const std::string& context);

// Scalar shape variables, one entry per agent. Indices are 0-based here;
// neighbour references wrap mod n.
struct ShapeState {
  std::vector<double> rho;      // |r_{i+1} - r_i|
  std::vector<double> kappa;    // heading -> bearing to agent i+1
  std::vector<double> theta;    // heading -> bearing to agent i-1
  std::vector<double> rho_b;    // |r_b - r_i|
  std::vector<double> kappa_b;  // heading -> bearing to the beacon

  int n() const { return static_cast<int>(rho.size()); }
  static ShapeState zeros(int n);

  // Agent-blocked flattening (rho, kappa, theta, rho_b, kappa_b) per agent.
  std::vector<double> to_vector() const;
  static ShapeState from_vector(std::span<const double> v);
};

}  // namespace pursuit
