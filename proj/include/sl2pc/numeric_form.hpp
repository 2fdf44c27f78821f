#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "errors.hpp"
#include "flat.hpp"
#include "graded.hpp"
#include "sl2_core.hpp"

namespace sl2pc {

using Locus = CallableField::Locus;

// A differential form known through point evaluation. Flat-family and
// polynomial forms carry their exact source so d stays exact.
struct NumericForm {
  int deg = 0;
  Locus locus = Locus::none;
  std::function<Alt(const Vec6&)> fn;
  std::shared_ptr<const FlatForm> flat;
  std::shared_ptr<const GradedField> poly;
  int budget = 2;  // finite-difference derivatives still allowed

  Alt operator()(const Vec6& x) const { return fn(x); }
  double operator()(const Vec6& x, const std::vector<Vec6>& vs) const { return evaluate(fn(x), vs); }
};

inline NumericForm numeric(const FlatForm& f) {
  auto p = std::make_shared<const FlatForm>(f);
  NumericForm n;
  n.deg = f.deg;
  n.flat = p;
  n.fn = [p](const Vec6& x) { return p->eval(x); };
  return n;
}

inline NumericForm numeric(const GradedField& g) {
  if (g.var != Variance::form) throw Error(Errc::variance_mismatch, "numeric form from multivector");
  auto p = std::make_shared<const GradedField>(g);
  NumericForm n;
  n.deg = g.deg;
  n.poly = p;
  n.fn = [p](const Vec6& x) { return evaluate(*p, x); };
  return n;
}

inline NumericForm numeric(int deg, std::function<Alt(const Vec6&)> fn, Locus locus = Locus::none,
                           int budget = 2) {
  NumericForm n;
  n.deg = deg;
  n.fn = std::move(fn);
  n.locus = locus;
  n.budget = budget;
  return n;
}

inline double fd_step(const Vec6& x, double base) { return base * (1 + norm6(x)); }

// Stencil of half-width h around x must stay clear of the declared locus.
inline void check_stencil(Locus locus, const Vec6& x, double h) {
  if (locus == Locus::none) return;
  double r = norm6(x);
  if (locus == Locus::origin && r <= 4 * h)
    throw Error(Errc::singular_stencil, "stencil reaches the origin");
  if (locus == Locus::cone) {
    auto z = zs(x);
    double af = std::abs(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    // |grad f| <= 2 |x|, so the stencil stays off f = 0 with margin
    if (af <= 8 * h * (r + h)) throw Error(Errc::singular_stencil, "stencil reaches the cone");
  }
}

// Richardson-extrapolated central difference of a vector-valued map.
template <class T, class F>
T richardson_partial(F&& fn, const Vec6& x, int j, double h) {
  auto central = [&](double s) {
    Vec6 p = x, m = x;
    p[j] += s;
    m[j] -= s;
    T a = fn(p), b = fn(m);
    return std::pair<T, T>{a, b};
  };
  auto [a1, b1] = central(h);
  auto [a2, b2] = central(h / 2);
  T r = a2;
  for (std::size_t k = 0; k < std::size(r); ++k) {
    double d1 = (a1[k] - b1[k]) / (2 * h), d2 = (a2[k] - b2[k]) / h;
    r[k] = (4 * d2 - d1) / 3;
  }
  return r;
}

// Jacobian (target x source) of a smooth map R^6 -> R^6.
template <class F>
Mat6 jacobian_fd(F&& map, const Vec6& x, double h) {
  Mat6 j{};
  for (int c = 0; c < 6; ++c) {
    Vec6 col = richardson_partial<Vec6>(map, x, c, h);
    for (int r = 0; r < 6; ++r) j[r][c] = col[r];
  }
  return j;
}

// Partial derivative of a form-valued map.
template <class F>
Alt alt_partial(F&& fn, const Vec6& x, int j, double h) {
  auto arr = [&](const Vec6& y) { return fn(y).c; };
  Alt r = fn(x);
  r.c = richardson_partial<std::array<double, 64>>(arr, x, j, h);
  return r;
}

// d beta = sum_j dx_j ^ d_j beta, by differences.
template <class F>
Alt numeric_ext_deriv(F&& fn, const Vec6& x, int deg, double h) {
  Alt r(Variance::form, deg + 1);
  for (int j = 0; j < 6; ++j) {
    Alt dj = alt_partial(fn, x, j, h);
    Vec6 e{};
    e[j] = 1;
    r += wedge(Alt::vector(Variance::form, e), dj);
  }
  return r;
}

constexpr double kOuterStep = 1e-3;  // relative step for d of quadrature-defined forms
constexpr double kInnerStep = 1e-5;  // relative step for Jacobians of maps

inline NumericForm ext_deriv(const NumericForm& a) {
  if (a.flat) return numeric(a.flat->ext_deriv());
  if (a.poly) return numeric(sl2pc::ext_deriv(*a.poly));
  if (a.budget <= 0) throw Error(Errc::derivative_budget_exceeded, "no derivatives left");
  NumericForm r;
  r.deg = a.deg + 1;
  r.locus = a.locus;
  r.budget = a.budget - 1;
  auto f = a.fn;
  int deg = a.deg;
  Locus locus = a.locus;
  r.fn = [f, deg, locus](const Vec6& x) {
    double h = fd_step(x, kOuterStep);
    check_stencil(locus, x, h);
    return numeric_ext_deriv(f, x, deg, h);
  };
  return r;
}

}  // namespace sl2pc
