#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace sl2pc {

// Truncated Taylor jet: c[k] = f^{(k)}(x0)/k!.
template <int N>
struct Jet {
  std::array<double, N> c{};

  static Jet constant(double v) { Jet j; j.c[0] = v; return j; }
  static Jet variable(double x0) { Jet j; j.c[0] = x0; if (N > 1) j.c[1] = 1; return j; }

  friend Jet operator+(Jet a, const Jet& b) { for (int i = 0; i < N; ++i) a.c[i] += b.c[i]; return a; }
  friend Jet operator-(Jet a, const Jet& b) { for (int i = 0; i < N; ++i) a.c[i] -= b.c[i]; return a; }
  friend Jet operator*(double s, Jet a) { for (auto& v : a.c) v *= s; return a; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; i + j < N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < N; ++k) {
      double s = a.c[k];
      for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
  double derivative(int n) const {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return c[n] * f;
  }
};

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += j * a.c[j] * r.c[k - j];
    r.c[k] = s / k;
  }
  return r;
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  Jet<N> r;
  r.c[0] = std::sqrt(a.c[0]);
  for (int k = 1; k < N; ++k) {
    double s = a.c[k];
    for (int j = 1; j < k; ++j) s -= r.c[j] * r.c[k - j];
    r.c[k] = s / (2 * r.c[0]);
  }
  return r;
}

// theta_1(x^2) = tanh x / x, theta_2(x^2) = cosh x, theta_3(x^2) = sinh x / x.
// Derivatives are taken in the argument u = x^2.
namespace theta_detail {

constexpr int kSeriesTerms = 40;
constexpr double kSwitch = 0.25;

inline const std::array<std::array<double, kSeriesTerms>, 3>& series() {
  static const auto tab = [] {
    std::array<std::array<double, kSeriesTerms>, 3> t{};
    std::vector<Rational> c2(kSeriesTerms), c3(kSeriesTerms), c1(kSeriesTerms);
    Rational f = 1;  // (2k)!
    for (int k = 0; k < kSeriesTerms; ++k) {
      if (k > 0) f *= Rational((2 * k - 1) * (2 * k));
      c2[k] = 1 / f;
      c3[k] = 1 / (f * (2 * k + 1));
    }
    for (int k = 0; k < kSeriesTerms; ++k) {
      Rational s = c3[k];
      for (int j = 1; j <= k; ++j) s -= c2[j] * c1[k - j];
      c1[k] = s;
    }
    for (int k = 0; k < kSeriesTerms; ++k) {
      t[0][k] = c1[k].get_d();
      t[1][k] = c2[k].get_d();
      t[2][k] = c3[k].get_d();
    }
    return t;
  }();
  return tab;
}

// sum_{k>=n} a_k k!/(k-n)! u^{k-n}, Horner from the top term.
inline double series_derivative(int which, int n, double u) {
  const auto& a = series()[which - 1];
  double s = 0;
  for (int k = kSeriesTerms - 1; k >= n; --k) {
    double ff = 1;
    for (int j = 0; j < n; ++j) ff *= (k - j);
    s = s * u + a[k] * ff;
  }
  return s;
}

}  // namespace theta_detail

// n-th derivative of theta_which at u >= 0. With scaled=true, theta_2 and
// theta_3 results are multiplied by 1/cosh(sqrt u) (overflow-free).
inline double theta(int which, int n, double u, bool scaled = false) {
  if (which < 1 || which > 3 || n < 0 || n > 6 || u < 0)
    throw Error(Errc::derivative_budget_exceeded, "theta argument out of range");
  double x = std::sqrt(u);
  if (u < theta_detail::kSwitch) {
    double v = theta_detail::series_derivative(which, n, u);
    if (scaled && which != 1) v /= std::cosh(x);
    return v;
  }
  constexpr int N = 8;
  Jet<N> s = sqrt(Jet<N>::variable(u));
  Jet<N> r;
  if (which == 1) {
    Jet<N> e = exp(-2.0 * s);
    r = (Jet<N>::constant(1) - e) / ((Jet<N>::constant(1) + e) * s);
  } else {
    // e^{-x} cosh(s) = (e^{s-x} + e^{-s-x}) / 2
    Jet<N> a = exp(s - Jet<N>::constant(x)), b = exp(-1.0 * s - Jet<N>::constant(x));
    Jet<N> ch = 0.5 * (a + b), sh = 0.5 * (a - b);
    r = which == 2 ? ch : sh / s;
    double scale = scaled ? 2.0 / (1.0 + std::exp(-2 * x)) : std::exp(x);
    for (auto& v : r.c) v *= scale;
  }
  return r.derivative(n);
}

// tanh(a t)/a, smooth through a = 0.
inline double tanh_over(double a, double t) { return t * theta(1, 0, a * a * t * t); }

struct ThetaBounds {
  int n = 0;
  double c1 = 0, c2 = 0, c3 = 0;  // fitted constants of the three bounds
};

// |th1^(n)(x^2)| (1+x)^{2n+1}, |th2^(n)(x^2)| (1+x)^n / cosh x,
// |th3^(n)(x^2)| (1+x)^{n+1} / cosh x, maximized over the grid.
inline ThetaBounds theta_bounds_check(int n, const std::vector<double>& xs) {
  ThetaBounds b;
  b.n = n;
  for (double x : xs) {
    double u = x * x;
    b.c1 = std::max(b.c1, std::fabs(theta(1, n, u)) * std::pow(1 + x, 2 * n + 1));
    b.c2 = std::max(b.c2, std::fabs(theta(2, n, u, true)) * std::pow(1 + x, n));
    b.c3 = std::max(b.c3, std::fabs(theta(3, n, u, true)) * std::pow(1 + x, n + 1));
  }
  return b;
}

inline std::vector<double> linear_grid(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace sl2pc
