#pragma once

#include <cmath>
#include <random>

#include "graded.hpp"
#include "sl2_core.hpp"

namespace sl2pc {

using Rng = std::mt19937_64;

inline double uniform(Rng& g, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(g);
}

inline double gaussian(Rng& g) { return std::normal_distribution<double>(0, 1)(g); }

inline Vec6 random_vec(Rng& g, double scale = 1) {
  Vec6 v;
  for (auto& x : v) x = scale * gaussian(g);
  return v;
}

// Uniform direction with trace norm R drawn uniformly in [0, rmax].
inline Sl2Point random_point(Rng& g, double rmax = 2) {
  Vec6 v = random_vec(g);
  double n = std::sqrt(2.0) * norm6(v);
  double r = uniform(g, 0, rmax);
  for (auto& x : v) x *= r / n;
  return Sl2Point(v);
}

inline Mat2 random_su2(Rng& g) {
  double q[4], n = 0;
  for (auto& x : q) { x = gaussian(g); n += x * x; }
  n = std::sqrt(n);
  return su2_from_quaternion(q[0] / n, q[1] / n, q[2] / n, q[3] / n);
}

inline std::array<double, 3> random_unit3(Rng& g) {
  std::array<double, 3> w;
  double n = 0;
  for (auto& x : w) { x = gaussian(g); n += x * x; }
  n = std::sqrt(n);
  for (auto& x : w) x /= n;
  return w;
}

}  // namespace sl2pc
