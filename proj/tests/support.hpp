#pragma once

#include <cmath>
#include <random>

#include "pursuit/numerics.hpp"
#include "pursuit/types.hpp"

namespace pursuit::testing {

inline ControlParams reference_params(int n = 3, double mu = 1.0) {
  return ControlParams::homogeneous(n, mu, 0.5, kPi / 6.0, kPi / 4.0);
}

inline ControlParams fig5_params() {
  return ControlParams::homogeneous(3, 2.0, 0.5, 7.0 * kPi / 12.0, 11.0 * kPi / 12.0);
}

inline ControlParams fig2_params() {
  ControlParams p = ControlParams::homogeneous(10, 1.0, 0.5, 0.0, kPi / 4.0);
  for (int i = 0; i < 10; ++i) p.alpha[i] = i < 3 ? kPi / 6.0 : (i < 6 ? kPi / 7.0 : kPi / 8.0);
  return p;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace pursuit::testing
