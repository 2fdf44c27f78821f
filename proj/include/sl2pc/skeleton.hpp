#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "errors.hpp"
#include "objects.hpp"
#include "sl2_core.hpp"

namespace sl2pc {

using R3 = std::array<double, 3>;

inline R3 cross(const R3& a, const R3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const R3& a, const R3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

struct DesingPoint {
  R3 w{1, 0, 0};
  cx lambda{};
};

inline void require_unit(const DesingPoint& d) {
  if (std::fabs(std::sqrt(dot(d.w, d.w)) - 1) > 1e-12)
    throw Error(Errc::not_unit, "w is not on the unit sphere");
}

// z_j = lambda w_j
inline Sl2Point rho(const DesingPoint& d) {
  require_unit(d);
  Vec6 p;
  for (int j = 0; j < 3; ++j) {
    cx z = d.lambda * d.w[j];
    p[2 * j] = z.real();
    p[2 * j + 1] = z.imag();
  }
  return Sl2Point(p);
}

// Oriented orthonormal tangent frame (u, v) at w with w.(u x v) = 1.
// Built from e3 when |w3| <= 0.9, otherwise from e1.
struct S2Chart {
  R3 u, v;
  int which = 0;
};

inline S2Chart s2_chart(const R3& w) {
  S2Chart c;
  R3 axis = std::fabs(w[2]) <= 0.9 ? R3{0, 0, 1} : R3{1, 0, 0};
  c.which = std::fabs(w[2]) <= 0.9 ? 0 : 1;
  R3 u = cross(axis, w);
  double n = std::sqrt(dot(u, u));
  for (auto& x : u) x /= n;
  c.u = u;
  c.v = cross(w, u);
  return c;
}

// Columns: (u,0), (v,0), d/dlambda1, d/dlambda2 in the chart at d.
using Jac64 = std::array<Vec6, 4>;

inline Jac64 rho_jacobian(const DesingPoint& d) {
  require_unit(d);
  auto c = s2_chart(d.w);
  Jac64 j{};
  const cx I(0, 1);
  for (int k = 0; k < 3; ++k) {
    cx a = d.lambda * c.u[k], b = d.lambda * c.v[k], l1 = d.w[k], l2 = I * d.w[k];
    j[0][2 * k] = a.real(); j[0][2 * k + 1] = a.imag();
    j[1][2 * k] = b.real(); j[1][2 * k + 1] = b.imag();
    j[2][2 * k] = l1.real(); j[2][2 * k + 1] = l1.imag();
    j[3][2 * k] = l2.real(); j[3][2 * k + 1] = l2.imag();
  }
  return j;
}

// Numerical rank of the 6x4 Jacobian via Gram-Schmidt.
inline int jacobian_rank(const Jac64& j, double tol = 1e-10) {
  std::array<Vec6, 4> q{};
  int r = 0;
  double scale = 0;
  for (auto& c : j) scale = std::max(scale, norm6(c));
  for (auto c : j) {
    for (int k = 0; k < r; ++k) {
      double s = 0;
      for (int i = 0; i < 6; ++i) s += q[k][i] * c[i];
      for (int i = 0; i < 6; ++i) c[i] -= s * q[k][i];
    }
    double n = norm6(c);
    if (n > tol * (1 + scale)) {
      for (int i = 0; i < 6; ++i) c[i] /= n;
      q[r++] = c;
    }
  }
  return r;
}

// Forms on S^2 x C in the chart basis: omega_S2 = du^dv, dlambda1 ^ dlambda2 on (2,3).
inline double chart_form(int a, int b, int i, int j) {
  if (a == i && b == j) return 1;
  if (a == j && b == i) return -1;
  return 0;
}

// max over chart pairs of |rho^* phi - 4|lambda|^2 dl1^dl2|
inline double pullback_identity_phi(const DesingPoint& d) {
  Jac64 j = rho_jacobian(d);
  Alt phi = evaluate(phi_form(), rho(d).coords());
  double l2 = std::norm(d.lambda), res = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      double lhs = evaluate(phi, {j[a], j[b]});
      res = std::max(res, std::fabs(lhs - 4 * l2 * chart_form(a, b, 2, 3)));
    }
  return res;
}

// Residuals of rho^* omega~_1 = -lambda1 omega_S2 and rho^* omega~_2 = lambda2 omega_S2
// over all chart pairs.
inline std::pair<double, double> pullback_identity_omega(const DesingPoint& d) {
  if (d.lambda == cx(0)) throw Error(Errc::cone_point, "omega~ is singular at lambda = 0");
  Jac64 j = rho_jacobian(d);
  Vec6 x = rho(d).coords();
  Alt w1 = omega_tilde(1).eval(x), w2 = omega_tilde(2).eval(x);
  double r1 = 0, r2 = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      double s = chart_form(a, b, 0, 1);
      r1 = std::max(r1, std::fabs(evaluate(w1, {j[a], j[b]}) + d.lambda.real() * s));
      r2 = std::max(r2, std::fabs(evaluate(w2, {j[a], j[b]}) - d.lambda.imag() * s));
    }
  return {r1, r2};
}

// W_1 = (l1 d_l1 - l2 d_l2)/(2|l|^2), W_2 = (l2 d_l1 + l1 d_l2)/(2|l|^2), chart components.
inline std::array<double, 4> w_chart_field(int i, const cx& lambda) {
  double l1 = lambda.real(), l2 = lambda.imag(), n = 2 * std::norm(lambda);
  if (i == 1) return {0, 0, l1 / n, -l2 / n};
  return {0, 0, l2 / n, l1 / n};
}

// |d rho(W_i) - V_i(rho)|, i = 1, 2
inline std::pair<double, double> w_fields_related(const DesingPoint& d) {
  if (d.lambda == cx(0)) throw Error(Errc::cone_point, "W_i is singular at lambda = 0");
  Jac64 j = rho_jacobian(d);
  Vec6 x = rho(d).coords();
  double res[2];
  for (int i = 1; i <= 2; ++i) {
    auto w = w_chart_field(i, d.lambda);
    Vec6 v = v_field(i).eval(x).as_vec();
    Vec6 diff;
    for (int k = 0; k < 6; ++k) {
      double s = 0;
      for (int a = 0; a < 4; ++a) s += j[a][k] * w[a];
      diff[k] = s - v[k];
    }
    res[i - 1] = norm6(diff);
  }
  return {res[0], res[1]};
}

// Rotation R_U acting on w, taken from Ad_U on the z-coordinates.
inline R3 rotate(const Mat2& u, const R3& w) {
  auto r = rotation_of(u);
  R3 out{};
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) out[k] += r[k][j] * w[j];
  return out;
}

// |U rho(w,l) U* - rho(R_U w, l)|
inline double rho_equivariance_residual(const Mat2& u, const DesingPoint& d) {
  Sl2Point lhs = conjugate(u, rho(d));
  Sl2Point rhs = rho({rotate(u, d.w), d.lambda});
  return (lhs.matrix() - rhs.matrix()).norm();
}

// The convention linking hopf to R_U: hopf(U) = R_U e_1.
inline double hopf_rotation_residual(const Mat2& u) {
  R3 a = hopf(u), b = rotate(u, {1, 0, 0});
  double s = 0;
  for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace sl2pc
