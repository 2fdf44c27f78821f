#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "errors.hpp"
#include "graded.hpp"

namespace sl2pc {

using cx = std::complex<double>;

struct Mat2 {
  cx a{}, b{}, c{}, d{};  // [[a,b],[c,d]]

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 scalar(cx s) { return {s, 0, 0, s}; }

  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  cx trace() const { return a + d; }
  cx det() const { return a * d - b * c; }
  // Frobenius norm sqrt(tr(M M*)).
  double norm() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }
  double max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  }
  Mat2 inverse() const {
    cx dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator*(cx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  friend Mat2 operator*(double s, const Mat2& x) { return cx(s) * x; }
};

inline Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }

// z_j = x_j + i y_j, coordinates ordered (x1,y1,x2,y2,x3,y3).
inline std::array<cx, 3> zs(const Vec6& p) {
  return {cx(p[0], p[1]), cx(p[2], p[3]), cx(p[4], p[5])};
}

inline Mat2 coords_to_matrix(const Vec6& p) {
  const cx I(0, 1);
  auto z = zs(p);
  return {I * z[0], -z[1] + I * z[2], z[1] + I * z[2], -I * z[0]};
}

inline Vec6 matrix_to_coords(const Mat2& m) {
  const cx I(0, 1);
  cx z1 = -I * m.a;
  cx z2 = (m.c - m.b) / 2.0;
  cx z3 = (m.c + m.b) / (2.0 * I);
  return {z1.real(), z1.imag(), z2.real(), z2.imag(), z3.real(), z3.imag()};
}

// Point of sl2(C) held in both pictures.
class Sl2Point {
 public:
  Sl2Point() : Sl2Point(Vec6{}) {}
  explicit Sl2Point(const Vec6& p) : coords_(p), m_(coords_to_matrix(p)) {}
  static Sl2Point from_matrix(const Mat2& m) { return Sl2Point(matrix_to_coords(m)); }

  const Vec6& coords() const { return coords_; }
  const Mat2& matrix() const { return m_; }

 private:
  Vec6 coords_;
  Mat2 m_;
};

struct InvariantScalars {
  cx f;
  double f1 = 0, f2 = 0, R2 = 0, absF = 0;
};

inline double ulp_tol(double scale, int ulps = 8) {
  return ulps * std::numeric_limits<double>::epsilon() * scale;
}

inline InvariantScalars invariants(const Sl2Point& p) {
  auto z = zs(p.coords());
  cx f = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  double r2 = 2 * (std::norm(z[0]) + std::norm(z[1]) + std::norm(z[2]));
  const Mat2& a = p.matrix();
  cx fm = a.det();
  double rm = (a * a.adjoint()).trace().real();
  double scale = 1 + r2;
  if (std::abs(f - fm) > ulp_tol(scale) || std::fabs(r2 - rm) > ulp_tol(scale))
    throw Error(Errc::cross_check_fail, "f or R^2 disagree between coords and matrix");
  return {f, f.real(), f.imag(), r2, std::abs(f)};
}

inline std::pair<Mat2, Mat2> char_residuals(const Sl2Point& p) {
  auto inv = invariants(p);
  const Mat2& a = p.matrix();
  Mat2 aa = a * a.adjoint();
  Mat2 r1 = a * a + Mat2::scalar(inv.f);
  Mat2 r2 = aa * aa - inv.R2 * aa + Mat2::scalar(inv.absF * inv.absF);
  return {r1, r2};
}

inline double skeleton_gap(const Sl2Point& p) {
  auto inv = invariants(p);
  return inv.R2 - 2 * inv.absF;
}

inline double commutator_norm(const Sl2Point& p) {
  return commutator(p.matrix(), p.matrix().adjoint()).norm();
}

inline bool is_special_unitary(const Mat2& u, double tol = 1e-12) {
  Mat2 e = u * u.adjoint() - Mat2::identity();
  return e.max_abs() <= tol && std::abs(u.det() - 1.0) <= tol;
}

inline std::array<double, 3> hopf(const Mat2& u) {
  if (!is_special_unitary(u)) throw Error(Errc::not_special_unitary, "hopf input");
  cx a = u.a, b = u.b;
  cx m = -2.0 * a * b;
  return {std::norm(a) - std::norm(b), m.imag(), m.real()};
}

inline Mat2 su2_from_quaternion(double q0, double q1, double q2, double q3) {
  // [[a,b],[-conj b, conj a]] with a = q0 + i q1, b = q2 + i q3
  cx a(q0, q1), b(q2, q3);
  return {a, b, -std::conj(b), std::conj(a)};
}

// Ad_U on sl2(C) acts on (z1,z2,z3) by a real rotation; column j is the
// image of the basis matrix with z_j = 1.
inline std::array<std::array<double, 3>, 3> rotation_of(const Mat2& u) {
  std::array<std::array<double, 3>, 3> r{};
  for (int j = 0; j < 3; ++j) {
    Vec6 e{};
    e[2 * j] = 1;
    auto img = matrix_to_coords(u * coords_to_matrix(e) * u.adjoint());
    for (int k = 0; k < 3; ++k) r[k][j] = img[2 * k];
  }
  return r;
}

// Real 6x6 matrix of Ad_U in coordinates.
inline Mat6 ad_matrix(const Mat2& u) {
  Mat6 m{};
  for (int j = 0; j < 6; ++j) {
    Vec6 e{};
    e[j] = 1;
    auto img = matrix_to_coords(u * coords_to_matrix(e) * u.adjoint());
    for (int k = 0; k < 6; ++k) m[k][j] = img[k];
  }
  return m;
}

inline Sl2Point conjugate(const Mat2& u, const Sl2Point& p) {
  return Sl2Point::from_matrix(u * p.matrix() * u.adjoint());
}

inline double norm6(const Vec6& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace sl2pc
