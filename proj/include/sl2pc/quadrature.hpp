#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "graded.hpp"

namespace sl2pc {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdiv = 400;
};

struct Panel {
  double a, b;
};

// Full Gauss-Legendre rule on [-1,1] (boost stores the non-negative half).
template <int N>
const std::vector<std::pair<double, double>>& gauss_rule() {
  static const auto rule = [] {
    using G = boost::math::quadrature::gauss<double, N>;
    std::vector<std::pair<double, double>> r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.push_back({x[i], w[i]});
      if (x[i] != 0) r.push_back({-x[i], w[i]});
    }
    std::sort(r.begin(), r.end());
    return r;
  }();
  return rule;
}

// Gauss-Legendre nodes and weights on [a,b].
template <int N>
std::vector<std::pair<double, double>> gauss_on(double a, double b) {
  std::vector<std::pair<double, double>> r;
  double h = (b - a) / 2, m = (a + b) / 2;
  for (auto [x, w] : gauss_rule<N>()) r.push_back({m + h * x, h * w});
  return r;
}

constexpr int kPanelOrder = 10;

template <class F>
Alt integrate_panel(F& fn, const Panel& p, long* evals = nullptr) {
  Alt s;
  bool first = true;
  for (auto [x, w] : gauss_on<kPanelOrder>(p.a, p.b)) {
    Alt v = fn(x);
    if (first) {
      s = Alt(v.var, v.deg);
      first = false;
    }
    s += w * v;
  }
  if (evals) *evals += kPanelOrder;
  return s;
}

template <class F>
Alt integrate_panels(F& fn, const std::vector<Panel>& panels, long* evals = nullptr) {
  Alt s;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    Alt v = integrate_panel(fn, panels[i], evals);
    if (i == 0) s = v;
    else s += v;
  }
  return s;
}

struct QuadResult {
  Alt value;
  double err = 0;
  long evals = 0;
  std::vector<Panel> panels;
};

// Adaptive bisection: a panel is accepted when its value agrees with the sum
// over its halves to its share of the tolerance. The accepted halves become
// the final panel list, so the rule can be replayed at nearby points.
template <class F>
QuadResult integrate_adaptive(F fn, const std::vector<double>& breaks, const QuadratureSpec& q) {
  QuadResult r;
  if (breaks.size() < 2) return r;
  double total = breaks.back() - breaks.front();
  struct Item { Panel p; Alt whole; };
  std::vector<Item> stack;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p{breaks[i], breaks[i + 1]};
    if (p.b > p.a) stack.push_back({p, integrate_panel(fn, p, &r.evals)});
  }
  std::vector<std::pair<Panel, Alt>> done;
  int splits = 0;
  bool ok = true;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    double mid = (it.p.a + it.p.b) / 2;
    Panel l{it.p.a, mid}, h{mid, it.p.b};
    Alt vl = integrate_panel(fn, l, &r.evals), vh = integrate_panel(fn, h, &r.evals);
    Alt both = vl + vh;
    double e = (both - it.whole).max_abs();
    double share = (it.p.b - it.p.a) / total;
    double allow = std::max(q.abs_tol, q.rel_tol * both.max_abs()) * share;
    if (e <= allow || splits >= q.max_subdiv) {
      if (e > allow) ok = false;
      done.push_back({l, vl});
      done.push_back({h, vh});
      r.err += e;
    } else {
      ++splits;
      stack.push_back({h, vh});
      stack.push_back({l, vl});
    }
  }
  std::sort(done.begin(), done.end(), [](auto& x, auto& y) { return x.first.a < y.first.a; });
  for (std::size_t i = 0; i < done.size(); ++i) {
    r.panels.push_back(done[i].first);
    if (i == 0) r.value = done[i].second;
    else r.value += done[i].second;
  }
  if (!ok) throw Error(Errc::quadrature_nonconverged, "subdivision budget exhausted");
  return r;
}

}  // namespace sl2pc
