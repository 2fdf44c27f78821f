#pragma once

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "flat.hpp"
#include "homotopy.hpp"
#include "numeric_form.hpp"

namespace sl2pc {

// Sample points for sup norms over the closed ball of radius r: a geometric
// cluster r 2^-j toward 0, extra radii near the boundary, and directions
// (uniform angles in 2 variables, Halton-based in 6).
struct FlatGrid {
  int dim = 6;
  double r = 1;
  std::vector<double> radii;
  std::vector<std::vector<double>> dirs;

  std::size_t size() const { return radii.size() * dirs.size(); }
  std::vector<double> point(std::size_t i) const {
    const auto& d = dirs[i % dirs.size()];
    double rad = radii[i / dirs.size()];
    std::vector<double> x(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) x[k] = rad * d[k];
    return x;
  }
};

inline double radical_inverse(unsigned i, unsigned base) {
  double f = 1, r = 0;
  while (i) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

inline FlatGrid flat_grid(int dim, double r, int ndirs = 0, int cluster = 20, int boundary = 8) {
  if (r <= 0) throw std::invalid_argument("flat grid radius must be positive");
  if (dim != 2 && dim != 6) throw std::invalid_argument("flat grid dimension must be 2 or 6");
  FlatGrid g;
  g.dim = dim;
  g.r = r;
  for (int j = 0; j <= cluster; ++j) g.radii.push_back(r * std::ldexp(1.0, -j));
  for (int i = 1; i < boundary; ++i) g.radii.push_back(r * (0.5 + 0.5 * i / boundary));
  std::sort(g.radii.begin(), g.radii.end());
  if (ndirs <= 0) ndirs = dim == 2 ? 64 : 200;
  if (dim == 2) {
    for (int i = 0; i < ndirs; ++i) {
      double a = 2 * M_PI * i / ndirs;
      g.dirs.push_back({std::cos(a), std::sin(a)});
    }
  } else {
    static const unsigned primes[6] = {2, 3, 5, 7, 11, 13};
    for (int i = 1; i <= ndirs; ++i) {
      std::vector<double> d(6);
      double n = 0;
      for (int k = 0; k < 6; ++k) {
        double u = radical_inverse(static_cast<unsigned>(i), primes[k]);
        d[k] = std::sqrt(2.0) * boost::math::erf_inv(2 * u - 1);
        n += d[k] * d[k];
      }
      n = std::sqrt(n);
      for (auto& v : d) v /= n;
      g.dirs.push_back(d);
    }
  }
  return g;
}

// max over i < n of fn(i), spread over threads
template <class F>
double parallel_max(std::size_t n, int threads, F&& fn) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  std::vector<double> best(threads, 0);
  std::vector<std::exception_ptr> err(threads);
  auto work = [&](int t) {
    try {
      for (std::size_t i = t; i < n; i += threads) best[t] = std::max(best[t], fn(i));
    } catch (...) {
      err[t] = std::current_exception();
    }
  };
  if (threads == 1) work(0);
  else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return *std::max_element(best.begin(), best.end());
}

template <int N>
std::vector<Exponent<N>> multi_indices(int n) {
  std::vector<Exponent<N>> out{Exponent<N>{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (total_degree<N>(out[i]) == n) continue;
    // extend only at or after the last nonzero slot so each index appears once
    int last = 0;
    for (int j = 0; j < N; ++j)
      if (out[i][j]) last = j;
    for (int j = last; j < N; ++j) {
      auto a = out[i];
      ++a[j];
      out.push_back(a);
    }
  }
  return out;
}

template <int N>
double inverse_factorial(const Exponent<N>& a) {
  double f = 1;
  for (int j = 0; j < N; ++j)
    for (int i = 2; i <= a[j]; ++i) f *= i;
  return 1 / f;
}

template <int N>
using FlatSum = std::vector<FlatFunction<N>>;

// All D^a s for |a| <= n, with the 1/a! factor kept separately.
template <int N>
std::vector<std::pair<double, FlatSum<N>>> flat_jet(const FlatSum<N>& s, int n) {
  std::map<Exponent<N>, FlatSum<N>> cache;
  std::vector<std::pair<double, FlatSum<N>>> out;
  for (auto& a : multi_indices<N>(n)) {
    FlatSum<N> d;
    if (total_degree<N>(a) == 0) d = s;
    else {
      int j = 0;
      while (!a[j]) ++j;
      auto b = a;
      --b[j];
      for (auto& f : cache.at(b)) {
        auto g = f.diff(j);
        if (!g.is_zero()) d.push_back(g);
      }
    }
    cache[a] = d;
    out.push_back({inverse_factorial<N>(a), d});
  }
  return out;
}

// sup over the grid and |a| <= n of |x|^-k |D^a s(x)| / a!
template <int N>
double flat_norm(const FlatSum<N>& s, int n, double k, const FlatGrid& grid, int threads = 1) {
  if (grid.dim != N) throw std::invalid_argument("grid dimension mismatch");
  if (n < 0) throw std::invalid_argument("norm order must be >= 0");
  auto jet = flat_jet<N>(s, n);
  return parallel_max(grid.size(), threads, [&](std::size_t i) {
    auto x = grid.point(i);
    double m = 0;
    for (auto& [w, fs] : jet) {
      double v = 0;
      for (auto& f : fs) v += f.weighted(x.data(), k);
      m = std::max(m, w * std::fabs(v));
    }
    return m;
  });
}

template <int N>
double flat_norm(const FlatFunction<N>& s, int n, double k, const FlatGrid& grid, int threads = 1) {
  return flat_norm<N>(FlatSum<N>{s}, n, k, grid, threads);
}

inline double flat_norm(const FlatForm& a, int n, double k, const FlatGrid& grid, int threads = 1) {
  double m = 0;
  for (auto& [mask, fs] : a.terms) m = std::max(m, flat_norm<6>(fs, n, k, grid, threads));
  return m;
}

// D^a of a form-valued map by nested Richardson differences.
inline Alt numeric_partial(const std::function<Alt(const Vec6&)>& fn, const Vec6& x, Exponent<6> a, double h) {
  int j = 0;
  while (j < 6 && !a[j]) ++j;
  if (j == 6) return fn(x);
  --a[j];
  auto inner = [&](const Vec6& y) { return numeric_partial(fn, y, a, h); };
  return alt_partial(inner, x, j, h);
}

// Flat norm of the coefficients of a numeric form. Flat-family and polynomial
// forms are differentiated exactly; others by differences within their budget.
inline double flat_norm(const NumericForm& a, int n, double k, const FlatGrid& grid, int threads = 1) {
  if (grid.dim != 6) throw std::invalid_argument("forms live on 6 variables");
  if (a.flat) return flat_norm(*a.flat, n, k, grid, threads);
  auto weight = [k](const Vec6& x) { return k == 0 ? 1.0 : std::pow(norm6(x), -k); };
  if (a.poly) {
    std::vector<std::pair<double, std::vector<std::pair<Mask, Poly6>>>> jet;
    for (auto& e : multi_indices<6>(n)) {
      std::vector<std::pair<Mask, Poly6>> d;
      for (auto& [m, p] : a.poly->terms) {
        Poly6 q = p;
        for (int j = 0; j < 6; ++j)
          for (int i = 0; i < e[j]; ++i) q = q.diff(j);
        d.push_back({m, q});
      }
      jet.push_back({inverse_factorial<6>(e), d});
    }
    return parallel_max(grid.size(), threads, [&](std::size_t i) {
      auto p = grid.point(i);
      Vec6 x;
      std::copy(p.begin(), p.end(), x.begin());
      double m = 0;
      for (auto& [w, d] : jet)
        for (auto& [mask, q] : d) m = std::max(m, w * std::fabs(q.eval<double>(x)));
      return m * weight(x);
    });
  }
  if (n > a.budget) throw Error(Errc::not_differentiable_input, "norm order exceeds derivative budget");
  auto idx = multi_indices<6>(n);
  return parallel_max(grid.size(), threads, [&](std::size_t i) {
    auto p = grid.point(i);
    Vec6 x;
    std::copy(p.begin(), p.end(), x.begin());
    double h = fd_step(x, kOuterStep);
    if (n > 0) check_stencil(a.locus, x, h);
    double m = 0;
    for (auto& e : idx) m = std::max(m, inverse_factorial<6>(e) * numeric_partial(a.fn, x, e, h).max_abs());
    double w = weight(x);
    return m == 0 ? 0.0 : m * w;
  });
}

// ---------------------------------------------------------------------------
// Semi-local bounded estimates: ratios ||l(a)||_{n,k,r} / ||a||_{n+a,k+bn+c,r}.

struct SlbTriple {
  int a = 0, b = 0, c = 0;
};

enum class SlbOp { identity, poly_mult, partial, h_skeleton, h_su2, delta_op, composed };

inline const char* slb_op_name(SlbOp op) {
  switch (op) {
    case SlbOp::identity: return "identity";
    case SlbOp::poly_mult: return "poly_mult";
    case SlbOp::partial: return "partial";
    case SlbOp::h_skeleton: return "h_skeleton";
    case SlbOp::h_su2: return "h_su2";
    case SlbOp::delta_op: return "delta_op";
    case SlbOp::composed: return "composed";
  }
  return "?";
}

struct SlbOptions {
  Poly6 multiplier = Poly6(1) + X(1) * X(1) - Y(3) * X(2);
  int partial_var = 0;
  double tol = 1e-7;  // h_S truncation and quadrature
  int ball_strength = 12;
  int su2_nt = 8;
};

inline FlatForm flat_partial(const FlatForm& a, int j) {
  FlatForm r;
  r.deg = a.deg;
  for (auto& [m, fs] : a.terms)
    for (auto& f : fs) r.add(m, f.diff(j));
  return r;
}

inline std::function<NumericForm(const NumericForm&)> slb_operator(SlbOp op, const SlbOptions& o = {}) {
  auto need_flat = [](const NumericForm& a) -> const FlatForm& {
    if (!a.flat) throw Error(Errc::tail_bound_unavailable, "operator needs a flat-family input");
    return *a.flat;
  };
  switch (op) {
    case SlbOp::identity:
      return [](const NumericForm& a) { return a; };
    case SlbOp::poly_mult:
      return [o, need_flat](const NumericForm& a) {
        return numeric(wedge(GradedField::scalar(Variance::form, o.multiplier), need_flat(a)));
      };
    case SlbOp::partial:
      return [o, need_flat](const NumericForm& a) { return numeric(flat_partial(need_flat(a), o.partial_var)); };
    case SlbOp::h_skeleton:
      return [o](const NumericForm& a) {
        return numeric(std::max(a.deg - 1, 0), [a, o](const Vec6& x) { return h_skeleton(a, x, o.tol); });
      };
    case SlbOp::h_su2:
      return [o](const NumericForm& a) {
        auto ball = std::make_shared<BallRule>(haar_ball_rule(o.ball_strength));
        return numeric(std::max(a.deg - 1, 0), [a, ball, o](const Vec6& x) { return h_su2(a, x, *ball, o.su2_nt); });
      };
    case SlbOp::delta_op:
      return [](const NumericForm& a) {
        return numeric(a.deg + 1, [a](const Vec6& x) { return delta_op(a(x), R2Tag::e1, x).part[0]; }, Locus::cone);
      };
    case SlbOp::composed:
      return [o, need_flat](const NumericForm& a) {
        NumericForm d = numeric(flat_partial(need_flat(a), o.partial_var));
        return numeric(std::max(a.deg - 1, 0), [d, o](const Vec6& x) { return h_skeleton(d, x, o.tol); });
      };
  }
  throw std::invalid_argument("unknown operator");
}

struct SlbResult {
  double max_ratio = 0;
  std::vector<double> ratios;       // one per non-degenerate sample
  std::vector<std::string> skipped;  // degenerate samples
};

inline SlbResult slb_ratio(const std::function<NumericForm(const NumericForm&)>& op, SlbTriple t, int n, int k,
                           const std::vector<NamedFlatForm>& family, const FlatGrid& grid, int threads = 1) {
  SlbResult r;
  for (auto& nf : family) {
    NumericForm a = numeric(nf.form);
    double den = flat_norm(a, n + t.a, k + t.b * n + t.c, grid, threads);
    if (den == 0) {
      r.skipped.push_back(nf.name);
      continue;
    }
    double num = flat_norm(op(a), n, k, grid, threads);
    r.ratios.push_back(num / den);
    r.max_ratio = std::max(r.max_ratio, num / den);
  }
  if (r.ratios.empty()) throw Error(Errc::division_by_zero_norm, "every sample has zero norm");
  return r;
}

// The family and its image under a fixed polynomial multiplier.
inline std::vector<NamedFlatForm> doubled_family(const std::vector<NamedFlatForm>& f) {
  auto out = f;
  GradedField q = GradedField::scalar(Variance::form, Poly6(1) + Rational(1, 2) * X(2) * Y(1) - X(3) * X(3));
  for (auto& nf : f) out.push_back({nf.name + "'", wedge(q, nf.form)});
  return out;
}

}  // namespace sl2pc
