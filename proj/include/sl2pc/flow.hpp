#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sampling.hpp"
#include "sl2_core.hpp"
#include "theta.hpp"

namespace sl2pc {

// W_A = 1/4 [A,[A,A*]]
inline Mat2 w_matrix(const Mat2& a) {
  return 0.25 * commutator(a, commutator(a, a.adjoint()));
}

struct WField {
  Mat2 matrix;
  Vec6 coords;
  double norm2 = 0;     // squared Euclidean norm of coords
  double expected = 0;  // R^2 (R^4 - 4|f|^2) / 8
};

inline WField w_field(const Sl2Point& p) {
  WField w;
  w.matrix = w_matrix(p.matrix());
  w.coords = matrix_to_coords(w.matrix);
  for (double v : w.coords) w.norm2 += v * v;
  auto s = invariants(p);
  w.expected = s.R2 * (s.R2 * s.R2 - 4 * s.absF * s.absF) / 8;
  return w;
}

// Square root of a positive definite Hermitian 2x2 matrix.
inline Mat2 hermitian_sqrt(const Mat2& m) {
  double sd = std::sqrt(std::max(0.0, m.det().real()));
  double den = std::sqrt(m.trace().real() + 2 * sd);
  return (1.0 / den) * (m + Mat2::scalar(sd));
}

// 1/(cosh(a t) + R^2 sinh(a t)/a)
inline double eps_scalar(double a, double r2, double t) {
  double at = a * t;
  if (at > 20) {
    double e = std::exp(-at);
    return 2 * e / ((1 + e * e) + (1 - e * e) * r2 / a);
  }
  double u = at * at;
  return 1 / (theta(2, 0, u) + t * r2 * theta(3, 0, u));
}

// R_t^2 for x' = a^2 - x^2, x(0) = r2.
inline double r2_scalar(double a, double r2, double t) {
  double T = tanh_over(a, t);
  return (a * a * T + r2) / (1 + r2 * T);
}

struct FlowState {
  Sl2Point A_t;
  double t = 0;
  double R2_t = 0;
  Mat2 K_t;
  double eps_t = 1;
  double varsigma_t() const { return 1 / eps_t; }
};

inline Mat2 flow_gauge(const Mat2& a, double absF, double t) {
  Mat2 aa = a * a.adjoint();
  return hermitian_sqrt(Mat2::identity() + tanh_over(absF, t) * aa);
}

inline FlowState flow_closed(const Sl2Point& p, double t) {
  if (t < 0) throw std::invalid_argument("flow time must be non-negative");
  auto s = invariants(p);
  const Mat2& a = p.matrix();
  Mat2 g = flow_gauge(a, s.absF, t);
  FlowState st;
  st.t = t;
  st.A_t = Sl2Point::from_matrix(g.inverse() * a * g);
  double af = 2 * s.absF;
  st.R2_t = r2_scalar(af, s.R2, t);
  st.eps_t = eps_scalar(af, s.R2, t);
  st.K_t = st.eps_t * commutator(a, a.adjoint());
  return st;
}

inline Sl2Point flow_rk4(const Sl2Point& p, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  Mat2 a = p.matrix();
  double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    Mat2 k1 = w_matrix(a);
    Mat2 k2 = w_matrix(a + (h / 2) * k1);
    Mat2 k3 = w_matrix(a + (h / 2) * k2);
    Mat2 k4 = w_matrix(a + h * k3);
    a = a + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Sl2Point::from_matrix(a);
}

inline Sl2Point retract(const Sl2Point& p) {
  auto s = invariants(p);
  if (s.absF < 1e-13 * (1 + s.R2)) return Sl2Point();
  const Mat2& a = p.matrix();
  Mat2 g = hermitian_sqrt(Mat2::identity() + (1 / s.absF) * (a * a.adjoint()));
  return Sl2Point::from_matrix(g.inverse() * a * g);
}

// mu_{u,v}(t,R) = sum_{j=0}^{min(2u,v)} t^{u-j/2} R^{v-j}; u given as 2u.
inline double mu_eval(int two_u, int v, double t, double R) {
  int p = std::min(two_u, v);
  double s = 0;
  for (int j = 0; j <= p; ++j) s += std::pow(t, 0.5 * (two_u - j)) * std::pow(R, v - j);
  return s;
}

inline double mu_submult_constant(int tu1, int v1, int tu2, int v2,
                                  const std::vector<double>& ts, const std::vector<double>& rs) {
  double c = 0;
  for (double t : ts)
    for (double r : rs) {
      double num = mu_eval(tu1, v1, t, r) * mu_eval(tu2, v2, t, r);
      double den = mu_eval(tu1 + tu2, v1 + v2, t, r);
      if (den == 0) {
        if (num != 0) return INFINITY;
        continue;
      }
      c = std::max(c, num / den);
    }
  return c;
}

// A point with prescribed R^2 and f = F >= 0 real: z = (a, i b, 0).
inline Sl2Point point_with(double r2, double absF) {
  double a2 = std::max(0.0, (r2 / 2 + absF) / 2), b2 = std::max(0.0, (r2 / 2 - absF) / 2);
  return Sl2Point(Vec6{std::sqrt(a2), 0, 0, std::sqrt(b2), 0, 0});
}

struct EpsSample {
  double t;
  Sl2Point p;
};

// Structured grid: t in [0,tmax], R in (0,rmax], 2|f|/R^2 in [0,1].
inline std::vector<EpsSample> eps_grid(double tmax, double rmax, int nt, int nr, int nf) {
  std::vector<EpsSample> g;
  for (int i = 0; i < nt; ++i)
    for (int j = 1; j <= nr; ++j)
      for (int k = 0; k < nf; ++k) {
        double t = nt == 1 ? 0 : tmax * i / (nt - 1);
        double R = rmax * j / nr;
        double ratio = nf == 1 ? 0 : double(k) / (nf - 1);
        g.push_back({t, point_with(R * R, ratio * R * R / 2)});
      }
  return g;
}

inline std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1));
  return v;
}

// Geometric in t and R, since the extremal ratios sit near t -> 0 and R -> 0.
inline std::vector<EpsSample> growth_grid(double tmin, double tmax, double rmin, double rmax,
                                          int nt, int nr, int nf) {
  std::vector<EpsSample> g;
  for (double t : log_grid(tmin, tmax, nt))
    for (double R : log_grid(rmin, rmax, nr))
      for (int k = 0; k < nf; ++k) {
        double ratio = nf == 1 ? 0 : double(k) / (nf - 1);
        g.push_back({t, point_with(R * R, ratio * R * R / 2)});
      }
  return g;
}

// max of eps_t R_t^{2q} (1+tR^2)^q / R^{2q}
inline double eps_bound_check(double q, const std::vector<EpsSample>& grid) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  double c = 0;
  for (auto& [t, p] : grid) {
    auto s = invariants(p);
    if (s.R2 == 0) continue;
    double a = 2 * s.absF;
    double e = eps_scalar(a, s.R2, t), rt = r2_scalar(a, s.R2, t);
    c = std::max(c, e * std::pow(rt / s.R2, q) * std::pow(1 + t * s.R2, q));
  }
  return c;
}

// Max of |D^a A_t| / mu_{2n+1/2,3n+2}(t,R) over |a| = n, by central differences
// in the six real coordinates of the initial point.
struct GrowthSweep {
  std::array<double, 3> c{};  // n = 0, 1, 2
};

inline GrowthSweep derivative_growth_sweep(const std::vector<EpsSample>& grid, double h = 1e-3) {
  GrowthSweep out;
  auto at = [](const Vec6& x, double t) { return flow_closed(Sl2Point(x), t).A_t.coords(); };
  auto nrm = [](const Vec6& v) { return norm6(v); };
  for (auto& [t, p] : grid) {
    // phi_0 is the identity, so D^2 A_0 = 0 while mu_{9/2,8}(0,R) = 0 too
    if (t == 0) continue;
    double R = std::sqrt(invariants(p).R2);
    Vec6 x = p.coords();
    Vec6 f0 = at(x, t);
    out.c[0] = std::max(out.c[0], nrm(f0) / mu_eval(1, 2, t, R));
    std::array<Vec6, 6> fp, fm;
    for (int i = 0; i < 6; ++i) {
      Vec6 y = x;
      y[i] += h;
      fp[i] = at(y, t);
      y[i] -= 2 * h;
      fm[i] = at(y, t);
      Vec6 d;
      for (int k = 0; k < 6; ++k) d[k] = (fp[i][k] - fm[i][k]) / (2 * h);
      out.c[1] = std::max(out.c[1], nrm(d) / mu_eval(5, 5, t, R));
    }
    for (int i = 0; i < 6; ++i)
      for (int j = i; j < 6; ++j) {
        Vec6 d;
        if (i == j) {
          for (int k = 0; k < 6; ++k) d[k] = (fp[i][k] - 2 * f0[k] + fm[i][k]) / (h * h);
        } else {
          Vec6 y = x, pp, pm, mp, mm;
          y[i] += h; y[j] += h; pp = at(y, t);
          y[j] -= 2 * h; pm = at(y, t);
          y[i] -= 2 * h; mm = at(y, t);
          y[j] += 2 * h; mp = at(y, t);
          for (int k = 0; k < 6; ++k) d[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4 * h * h);
        }
        out.c[2] = std::max(out.c[2], nrm(d) / mu_eval(9, 8, t, R));
      }
  }
  return out;
}

}  // namespace sl2pc
