#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "flat.hpp"
#include "flow.hpp"
#include "numeric_form.hpp"
#include "objects.hpp"
#include "quadrature.hpp"
#include "skeleton.hpp"

namespace sl2pc {

inline Mat6 identity6() {
  Mat6 m{};
  for (int i = 0; i < 6; ++i) m[i][i] = 1;
  return m;
}

inline double abs_f(const Vec6& x) {
  auto z = zs(x);
  return std::abs(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
}

// ---------------------------------------------------------------------------
// Pullbacks along the flow, the retraction and rho.

struct PullMap {
  enum class Kind { flow, retract } kind = Kind::flow;
  double t = 0;

  static PullMap flow(double t) { return {Kind::flow, t}; }
  static PullMap retraction() { return {Kind::retract, 0}; }

  Vec6 operator()(const Vec6& x) const {
    if (kind == Kind::flow) return flow_closed(Sl2Point(x), t).A_t.coords();
    return retract(Sl2Point(x)).coords();
  }
};

inline Alt pullback_form(const PullMap& m, const NumericForm& a, const Vec6& x) {
  if (m.kind == PullMap::Kind::flow && m.t == 0) return a(x);
  double h = fd_step(x, kInnerStep);
  if (m.kind == PullMap::Kind::retract) check_stencil(Locus::cone, x, h);
  Vec6 y = m(x);
  check_stencil(a.locus, y, 0);
  return pull(jacobian_fd(m, x, h), a(y));
}

inline double pullback_eval(const PullMap& m, const NumericForm& a, const Vec6& x,
                            const std::vector<Vec6>& vs) {
  return evaluate(pullback_form(m, a, x), vs);
}

// (rho^* a) on chart vectors (components in the basis u, v, d_l1, d_l2).
inline double pullback_rho(const NumericForm& a, const DesingPoint& d,
                           const std::vector<std::array<double, 4>>& vs) {
  Jac64 j = rho_jacobian(d);
  std::vector<Vec6> pushed;
  for (auto& v : vs) {
    Vec6 w{};
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 6; ++k) w[k] += j[c][k] * v[c];
    pushed.push_back(w);
  }
  return evaluate(a(rho(d).coords()), pushed);
}

// ---------------------------------------------------------------------------
// h_t = int_0^t phi_s^* i_W a ds.

inline Alt ht_integrand(const NumericForm& a, const Vec6& x, double s) {
  PullMap m = PullMap::flow(s);
  Vec6 y = s == 0 ? x : m(x);
  Vec6 w = matrix_to_coords(w_matrix(coords_to_matrix(y)));
  Alt iw = contract(w, a(y));
  if (s == 0) return iw;
  return pull(jacobian_fd(m, x, fd_step(x, kInnerStep)), iw);
}

inline std::vector<double> geometric_breaks(double t, int levels = 6) {
  std::vector<double> b{0};
  for (int k = levels; k >= 1; --k) b.push_back(t / std::pow(2.0, k));
  b.push_back(t);
  return b;
}

inline QuadResult h_t_op(const NumericForm& a, const Vec6& x, double t, const QuadratureSpec& q) {
  if (t < 0) throw std::invalid_argument("t must be non-negative");
  QuadResult r;
  r.value = Alt(Variance::form, std::max(a.deg - 1, 0));
  if (t == 0 || a.deg == 0) return r;
  return integrate_adaptive([&](double s) { return ht_integrand(a, x, s); }, geometric_breaks(t), q);
}

inline Alt h_fixed(const NumericForm& a, const Vec6& x, const std::vector<Panel>& panels, int deg) {
  if (panels.empty()) return Alt(Variance::form, std::max(deg - 1, 0));
  auto f = [&](double s) { return ht_integrand(a, x, s); };
  return integrate_panels(f, panels);
}

// d of the quadrature-defined form, replaying the panels chosen at x.
inline Alt d_h_fixed(const NumericForm& a, const Vec6& x, const std::vector<Panel>& panels) {
  double h = fd_step(x, kOuterStep);
  check_stencil(a.locus, x, h);
  return numeric_ext_deriv([&](const Vec6& y) { return h_fixed(a, y, panels, a.deg); }, x,
                           std::max(a.deg - 1, 0), h);
}

struct Residual {
  double value = 0;
  double tol = 0;
  bool ok() const { return value <= tol; }
};

// phi_t^* a - a - d h_t a - h_t d a
inline Alt homotopy_residual_alt(const NumericForm& a, const Vec6& x, double t, const QuadratureSpec& q) {
  Alt lhs = pullback_form(PullMap::flow(t), a, x) - a(x);
  if (t == 0) return lhs;
  NumericForm da = ext_deriv(a);
  QuadResult ha = h_t_op(a, x, t, q);
  Alt r = lhs - h_t_op(da, x, t, q).value;
  if (a.deg > 0) r -= d_h_fixed(a, x, ha.panels);
  return r;
}

inline Residual homotopy_residual_t(const NumericForm& a, const Vec6& x, double t, const QuadratureSpec& q) {
  double R = std::sqrt(invariants(Sl2Point(x)).R2);
  return {homotopy_residual_alt(a, x, t, q).max_abs(), 1e-5 * std::pow(1 + R, a.deg + 1)};
}

// ---------------------------------------------------------------------------
// h_S = lim h_t with a certified truncation of the tail.

struct SkeletonRule {
  double T = 0;
  double tail = 0;     // bound on the discarded tail
  double C = 0;        // envelope constant estimated from samples
  int branch = 0;      // 0: integrand zero, 1: exponential, 2: power
  QuadResult quad;
};

constexpr double kSkeletonDelta = 0.05;
constexpr double kEnvelopeSafety = 4;

inline SkeletonRule h_skeleton_rule(const NumericForm& a, const Vec6& x, double tol,
                                    double delta = kSkeletonDelta) {
  if (!a.flat) throw Error(Errc::tail_bound_unavailable, "h_S needs a flat-family input");
  SkeletonRule r;
  r.quad.value = Alt(Variance::form, std::max(a.deg - 1, 0));
  auto s = invariants(Sl2Point(x));
  if (a.deg == 0 || skeleton_gap(Sl2Point(x)) <= 1e-14 * (1 + s.R2)) return r;
  double af = s.absF, R2 = s.R2;
  bool expo = af >= delta;
  r.branch = expo ? 1 : 2;
  auto env = [&](double t) {
    return expo ? eps_scalar(2 * af, R2, t) : R2 / ((1 + t * R2) * (1 + t * R2));
  };
  double probe = expo ? 8 / af : 8 / R2;
  for (int k = 0; k <= 24; ++k) {
    double t = k == 0 ? 0 : probe * std::pow(2.0, k - 24);
    r.C = std::max(r.C, ht_integrand(a, x, t).max_abs() / env(t));
  }
  r.C *= kEnvelopeSafety;
  // on the exponential branch the tail is kept below tol/2 even after a
  // (1+T)^2 growth factor, so differences of the truncated integral in x
  // also stay within tol
  auto tail = [&](double T) { return expo ? r.C * std::exp(-2 * af * T) / af : r.C / (1 + T * R2); };
  auto margin = [&](double T) { return expo ? (1 + T) * (1 + T) : 1.0; };
  double T = probe / 8;
  while (tail(T) * margin(T) > tol / 2 && T < 1e12) T *= 1.25;
  if (T >= 1e12) throw Error(Errc::tail_bound_unavailable, "tail does not decay fast enough");
  r.T = T;
  r.tail = tail(T);
  QuadratureSpec q{tol / 2, 1e-12, 2000};
  std::vector<double> breaks{0};
  for (double b = std::min(T, probe / 64); b < T; b *= 2) breaks.push_back(b);
  breaks.push_back(T);
  r.quad = integrate_adaptive([&](double t) { return ht_integrand(a, x, t); }, breaks, q);
  return r;
}

inline Alt h_skeleton(const NumericForm& a, const Vec6& x, double tol) {
  return h_skeleton_rule(a, x, tol).quad.value;
}

inline Alt p_skeleton(const NumericForm& a, const Vec6& x) {
  auto s = invariants(Sl2Point(x));
  if (s.absF <= 1e-8 * (1 + s.R2)) throw Error(Errc::on_cone, "p_S needs a point off the cone");
  return pullback_form(PullMap::retraction(), a, x);
}

inline NumericForm p_skeleton_form(const NumericForm& a) {
  return numeric(a.deg, [a](const Vec6& x) { return p_skeleton(a, x); }, Locus::cone);
}

// p_S a - a - d h_S a - h_S d a
inline Alt skeleton_residual_alt(const NumericForm& a, const Vec6& x, double tol) {
  Alt r = p_skeleton(a, x) - a(x);
  NumericForm da = ext_deriv(a);
  r -= h_skeleton(da, x, tol);
  if (a.deg > 0) {
    SkeletonRule rule = h_skeleton_rule(a, x, tol);
    if (!rule.quad.panels.empty()) r -= d_h_fixed(a, x, rule.quad.panels);
  }
  return r;
}

// ---------------------------------------------------------------------------
// SU(2) averaging.

// Orthonormal basis of su(2) for |X| = sqrt(tr XX*).
inline const std::array<Mat2, 3>& su2_basis() {
  static const std::array<Mat2, 3> b = [] {
    const cx I(0, 1);
    double s = 1 / std::sqrt(2.0);
    return std::array<Mat2, 3>{Mat2{s * I, 0, 0, -s * I}, Mat2{0, s, -s, 0}, Mat2{0, s * I, s * I, 0}};
  }();
  return b;
}

inline Mat2 su2_element(const std::array<double, 3>& v) {
  auto& b = su2_basis();
  return v[0] * b[0] + v[1] * b[1] + v[2] * b[2];
}

// exp X = cos(th) + sin(th)/th X with th = |X|/sqrt 2, since X^2 = -th^2.
inline Mat2 su2_exp(const std::array<double, 3>& v) {
  double th = std::sqrt((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) / 2);
  double sc = th < 1e-8 ? 1 - th * th / 6 : std::sin(th) / th;
  return Mat2::scalar(std::cos(th)) + sc * su2_element(v);
}

inline double haar_density_unnormalized(double r) {
  double th = r / std::sqrt(2.0);
  if (th < 1e-8) return 1;
  double s = std::sin(th) / th;
  return s * s;
}

struct BallRule {
  std::vector<std::pair<std::array<double, 3>, double>> nodes;
  double N = 0;  // density normalization found numerically
};

template <int NR>
BallRule haar_ball_rule_n(int n_dir) {
  BallRule b;
  const double rmax = std::sqrt(2.0) * M_PI;
  double total = 0;
  auto polar = gauss_on<NR>(-1, 1);
  int naz = 2 * n_dir;
  for (auto [r, wr] : gauss_on<NR>(0, rmax))
    for (auto [c, wc] : polar)
      for (int k = 0; k < naz; ++k) {
        double ph = 2 * M_PI * (k + 0.5) / naz, sn = std::sqrt(1 - c * c);
        double w = wr * r * r * haar_density_unnormalized(r) * wc * (2 * M_PI / naz);
        b.nodes.push_back({{r * sn * std::cos(ph), r * sn * std::sin(ph), r * c}, w});
        total += w;
      }
  b.N = 1 / total;
  for (auto& [x, w] : b.nodes) w *= b.N;
  return b;
}

inline BallRule haar_ball_rule(int strength) {
  switch (strength) {
    case 8: return haar_ball_rule_n<8>(8);
    case 12: return haar_ball_rule_n<12>(12);
    case 16: return haar_ball_rule_n<16>(16);
    case 20: return haar_ball_rule_n<20>(20);
    default: throw std::invalid_argument("ball rule strength must be 8, 12, 16 or 20");
  }
}

// Closed form of the normalization: 1 / (4 sqrt2 pi^2).
inline double haar_normalization_exact() { return 1 / (4 * std::sqrt(2.0) * M_PI * M_PI); }

// Haar measure on S^3: a = cos(eta) e^{i xi1}, b = sin(eta) e^{i xi2}, with
// u = sin^2(eta) uniform on [0,1].
struct S3Rule {
  std::vector<std::pair<Mat2, double>> nodes;
};

template <int NU>
S3Rule s3_rule_n(int nxi) {
  S3Rule s;
  for (auto [u, wu] : gauss_on<NU>(0, 1))
    for (int i = 0; i < nxi; ++i)
      for (int j = 0; j < nxi; ++j) {
        double x1 = 2 * M_PI * i / nxi, x2 = 2 * M_PI * j / nxi;
        cx a = std::polar(std::sqrt(1 - u), x1), b = std::polar(std::sqrt(u), x2);
        s.nodes.push_back({Mat2{a, b, -std::conj(b), std::conj(a)}, wu / (nxi * nxi)});
      }
  return s;
}

inline S3Rule s3_rule(int strength) {
  switch (strength) {
    case 4: return s3_rule_n<4>(8);
    case 8: return s3_rule_n<8>(16);
    case 12: return s3_rule_n<12>(24);
    case 16: return s3_rule_n<16>(32);
    default: throw std::invalid_argument("S3 rule strength must be 4, 8, 12 or 16");
  }
}

inline Alt ad_pullback(const Mat2& u, const NumericForm& a, const Vec6& x) {
  Mat6 l = ad_matrix(u);
  return pull(l, a(matvec(l, x)));
}

inline Alt p_su2(const NumericForm& a, const Vec6& x, const S3Rule& rule) {
  Alt s(Variance::form, a.deg);
  for (auto& [u, w] : rule.nodes) s += w * ad_pullback(u, a, x);
  return s;
}

inline Alt p_su2(const NumericForm& a, const Vec6& x, int strength) { return p_su2(a, x, s3_rule(strength)); }

inline Alt p_su2_exp(const NumericForm& a, const Vec6& x, const BallRule& rule) {
  Alt s(Variance::form, a.deg);
  for (auto& [v, w] : rule.nodes) s += w * ad_pullback(su2_exp(v), a, x);
  return s;
}

// int_ball int_0^1 Ad_{exp tX}^* i_{ad_X} a dt lambda(X)
inline Alt h_su2(const NumericForm& a, const Vec6& x, const BallRule& rule, int nt = 8) {
  Alt s(Variance::form, std::max(a.deg - 1, 0));
  if (a.deg == 0) return s;
  auto tn = nt <= 8 ? gauss_on<8>(0, 1) : gauss_on<16>(0, 1);
  for (auto& [v, w] : rule.nodes) {
    Mat2 X = su2_element(v);
    for (auto [t, wt] : tn) {
      std::array<double, 3> tv{t * v[0], t * v[1], t * v[2]};
      Mat6 l = ad_matrix(su2_exp(tv));
      Vec6 y = matvec(l, x);
      Mat2 q = coords_to_matrix(y);
      Vec6 adx = matrix_to_coords(commutator(X, q));
      s += (w * wt) * pull(l, contract(adx, a(y)));
    }
  }
  return s;
}

// p_SU2 a - a - d h_SU2 a - h_SU2 d a
inline Alt su2_residual_alt(const NumericForm& a, const Vec6& x, const S3Rule& s3, const BallRule& ball,
                            int nt = 8) {
  Alt r = p_su2(a, x, s3) - a(x);
  r -= h_su2(ext_deriv(a), x, ball, nt);
  if (a.deg > 0) {
    double h = fd_step(x, kOuterStep);
    r -= numeric_ext_deriv([&](const Vec6& y) { return h_su2(a, y, ball, nt); }, x, a.deg - 1, h);
  }
  return r;
}

// ---------------------------------------------------------------------------
// delta(eta (x) e_i) = (-1)^p gamma_i ^ eta,
// delta(eta (x) e1^e2) = (-1)^p (gamma_1 ^ eta (x) e2 - gamma_2 ^ eta (x) e1).

enum class R2Tag { one = 0, e1 = 1, e2 = 2, e12 = 3 };

struct TaggedForm {
  std::array<Alt, 4> part;  // indexed by R2Tag
  std::array<bool, 4> set{};

  void add(R2Tag t, const Alt& a) {
    int i = static_cast<int>(t);
    if (set[i]) part[i] += a;
    else { part[i] = a; set[i] = true; }
  }
  double max_abs() const {
    double m = 0;
    for (int i = 0; i < 4; ++i)
      if (set[i]) m = std::max(m, part[i].max_abs());
    return m;
  }
};

inline TaggedForm delta_op(const Alt& eta, R2Tag tag, const Vec6& x) {
  auto s = invariants(Sl2Point(x));
  if (s.absF <= 1e-12 * (1 + s.R2)) throw Error(Errc::on_cone, "delta needs a point off the cone");
  TaggedForm out;
  if (tag == R2Tag::one) return out;
  double sg = eta.deg % 2 ? -1 : 1;
  Alt g1 = gamma_field(1).eval(x), g2 = gamma_field(2).eval(x);
  if (tag == R2Tag::e1) out.add(R2Tag::one, sg * wedge(g1, eta));
  else if (tag == R2Tag::e2) out.add(R2Tag::one, sg * wedge(g2, eta));
  else {
    out.add(R2Tag::e2, sg * wedge(g1, eta));
    out.add(R2Tag::e1, -sg * wedge(g2, eta));
  }
  return out;
}

inline TaggedForm delta_op(const TaggedForm& in, const Vec6& x) {
  TaggedForm out;
  for (int i = 0; i < 4; ++i) {
    if (!in.set[i]) continue;
    auto r = delta_op(in.part[i], static_cast<R2Tag>(i), x);
    for (int k = 0; k < 4; ++k)
      if (r.set[k]) out.add(static_cast<R2Tag>(k), r.part[k]);
  }
  return out;
}

}  // namespace sl2pc
