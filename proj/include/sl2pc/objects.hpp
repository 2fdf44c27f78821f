#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "graded.hpp"
#include "sl2_core.hpp"

namespace sl2pc {

// Coordinate slots: x_j -> 2(j-1), y_j -> 2(j-1)+1.
inline int ix(int j) { return 2 * (j - 1); }
inline int iy(int j) { return 2 * (j - 1) + 1; }

inline GradedField e2(Variance v, int i, int j, const Poly6& c) {
  GradedField r(v, 2);
  if (i == j) return r;
  Mask a = static_cast<Mask>(1u << i), b = static_cast<Mask>(1u << j);
  r.add(a | b, Rational(wedge_sign(a, b)) * c);
  return r;
}

inline GradedField e1(Variance v, int i, const Poly6& c) {
  return GradedField::basis(v, static_cast<Mask>(1u << i), c);
}

inline const std::array<std::array<int, 3>, 3>& cyclic() {
  static const std::array<std::array<int, 3>, 3> c{{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}};
  return c;
}

inline Poly6 f1_poly() {
  Poly6 s;
  for (int j = 1; j <= 3; ++j) s += X(j) * X(j) - Y(j) * Y(j);
  return s;
}
inline Poly6 f2_poly() {
  Poly6 s;
  for (int j = 1; j <= 3; ++j) s += Rational(2) * (X(j) * Y(j));
  return s;
}
// R^2 = tr(AA*) = 2 sum |z_j|^2
inline Poly6 r2_poly() {
  Poly6 s;
  for (int j = 1; j <= 3; ++j) s += Rational(2) * (X(j) * X(j) + Y(j) * Y(j));
  return s;
}

// pi1 = 4 Re pi_C, pi2 = 4 Im pi_C with pi_C = z1 dz2^dz3 + cyc.
inline GradedField pi1() {
  const auto V = Variance::multivector;
  GradedField p(V, 2);
  for (auto [a, b, c] : cyclic()) {
    p += e2(V, ix(b), ix(c), X(a)) - e2(V, iy(b), iy(c), X(a));
    p += e2(V, ix(b), iy(c), Y(a)) + e2(V, iy(b), ix(c), Y(a));
  }
  return p;
}
inline GradedField pi2() {
  const auto V = Variance::multivector;
  GradedField p(V, 2);
  for (auto [a, b, c] : cyclic()) {
    p += e2(V, ix(b), ix(c), Y(a)) - e2(V, iy(b), iy(c), Y(a));
    p -= e2(V, ix(b), iy(c), X(a)) + e2(V, iy(b), ix(c), X(a));
  }
  return p;
}

struct PoissonBivectors {
  GradedField piC_re, piC_im;  // pi_C = piC_re + i piC_im
  GradedField pi1, pi2;
};

inline PoissonBivectors poisson_bivectors() {
  PoissonBivectors b;
  b.pi1 = sl2pc::pi1();
  b.pi2 = sl2pc::pi2();
  b.piC_re = Rational(1, 4) * b.pi1;
  b.piC_im = Rational(1, 4) * b.pi2;
  return b;
}

inline GradedField phi_form() {
  return wedge(differential(f1_poly()), differential(f2_poly()));
}

inline GradedField trivector(int i, int j, int k, const Rational& c) {
  const auto V = Variance::multivector;
  GradedField a = e1(V, i, Poly6(1));
  return wedge(wedge(a, e1(V, j, Poly6(1))), e1(V, k, Poly6(c)));
}

// Constant Cartan trivectors (Re and Im of 1/2 dz1^dz2^dz3 in real form).
inline std::pair<GradedField, GradedField> cartan_cocycles() {
  const Rational h(1, 2);
  auto T = [&](int i, int j, int k, int s) { return trivector(i, j, k, s * h); };
  GradedField cr = T(ix(1), ix(2), ix(3), 1) + T(iy(1), iy(2), ix(3), -1) +
                   T(ix(1), iy(2), iy(3), -1) + T(iy(1), ix(2), iy(3), -1);
  GradedField ci = T(iy(1), iy(2), iy(3), 1) + T(iy(1), ix(2), ix(3), -1) +
                   T(ix(1), iy(2), ix(3), -1) + T(ix(1), ix(2), iy(3), -1);
  return {cr, ci};
}

inline GradedField vector_field(const std::array<Poly6, 6>& c) {
  GradedField v(Variance::multivector, 1);
  for (int i = 0; i < 6; ++i) v.add(static_cast<Mask>(1u << i), c[i]);
  return v;
}

// E1 = 1/2 sum (x d/dx + y d/dy): real part of sum z d/dz.
inline GradedField euler_e1() {
  std::array<Poly6, 6> c;
  for (int j = 1; j <= 3; ++j) {
    c[ix(j)] = Rational(1, 2) * X(j);
    c[iy(j)] = Rational(1, 2) * Y(j);
  }
  return vector_field(c);
}

inline GradedField full_euler() { return Rational(2) * euler_e1(); }

struct EulerConvention {
  std::string name;
  GradedField e2;
};

// Candidates for the imaginary Euler component, in the order tried.
inline std::vector<EulerConvention> euler_candidates() {
  std::vector<EulerConvention> out;
  auto make = [](const Rational& sy, const Rational& sx) {
    std::array<Poly6, 6> c;
    for (int j = 1; j <= 3; ++j) {
      c[ix(j)] = sy * Y(j);
      c[iy(j)] = sx * X(j);
    }
    return vector_field(c);
  };
  out.push_back({"E2 = 1/2 sum(y d/dx - x d/dy)", make(Rational(1, 2), Rational(-1, 2))});
  out.push_back({"E2 = 1/2 sum(x d/dy - y d/dx)", make(Rational(-1, 2), Rational(1, 2))});
  out.push_back({"E2 = sum(y d/dx - x d/dy)", make(1, -1)});
  out.push_back({"E2 = sum(x d/dy - y d/dx)", make(-1, 1)});
  return out;
}

struct EulerCheck {
  std::string convention;
  GradedField residual;        // pi2 - 2[pi1,E2]
  GradedField ec_residual_re;  // [pi1,E1] - 2 Re pi_C
  GradedField ec_residual_im;  // [pi1,E2] - 2 Im pi_C
  GradedField full_residual;   // [pi1, full Euler] - pi1
};

inline EulerCheck euler_identity_check() {
  auto pb = poisson_bivectors();
  for (auto& cand : euler_candidates()) {
    GradedField res = pb.pi2 - Rational(2) * schouten(pb.pi1, cand.e2);
    if (!res.is_zero()) continue;
    EulerCheck r;
    r.convention = cand.name;
    r.residual = res;
    r.ec_residual_re = schouten(pb.pi1, euler_e1()) - Rational(2) * pb.piC_re;
    r.ec_residual_im = schouten(pb.pi1, cand.e2) - Rational(2) * pb.piC_im;
    r.full_residual = schouten(pb.pi1, full_euler()) - pb.pi1;
    return r;
  }
  throw Error(Errc::no_convention_passes, "pi2 - 2[pi1,E2] nonzero for all candidates");
}

// ---------------------------------------------------------------------------
// Rational fields num / (R^2)^k, exact.

struct RationalField {
  GradedField num;
  int r2_power = 0;

  Alt eval(const Vec6& x) const {
    Alt a = evaluate(num, x);
    double r2 = r2_poly().eval<double>(x);
    a *= 1.0 / std::pow(r2, r2_power);
    return a;
  }
};

inline RationalField ext_deriv(const RationalField& w) {
  // d(N / R^{2k}) = (R^2 dN - k dR^2 ^ N) / R^{2(k+1)}
  GradedField n = r2_poly() * ext_deriv(w.num);
  if (w.r2_power)
    n -= Rational(w.r2_power) * wedge(differential(r2_poly()), w.num);
  return {n, w.r2_power + 1};
}

inline RationalField contract(const RationalField& v, const RationalField& w) {
  return {contract(v.num, w.num), v.r2_power + w.r2_power};
}

// Numerators of omega~_i (times R^2/2) and of V_i (times R^2).
inline GradedField omega_numerator(int i) {
  const auto F = Variance::form;
  GradedField p(F, 2);
  for (auto [a, b, c] : cyclic()) {
    GradedField dd = e2(F, iy(b), iy(c), Poly6(1)) - e2(F, ix(b), ix(c), Poly6(1));
    GradedField mixed = e2(F, ix(b), iy(c), Poly6(1)) + e2(F, iy(b), ix(c), Poly6(1));
    if (i == 1) p += X(a) * dd - Y(a) * mixed;
    else p += Y(a) * dd + X(a) * mixed;
  }
  return p;
}

inline RationalField omega_tilde(int i) {
  return {Rational(2) * omega_numerator(i), 1};
}

inline RationalField v_field(int i) {
  std::array<Poly6, 6> c;
  for (int j = 1; j <= 3; ++j) {
    if (i == 1) {
      c[ix(j)] = X(j);
      c[iy(j)] = -Y(j);
    } else {
      c[ix(j)] = Y(j);
      c[iy(j)] = X(j);
    }
  }
  return {vector_field(c), 1};
}

// gamma_i = i_{V_i} d omega~_1, exact numerator over (R^2)^3.
inline const RationalField& gamma_field(int i) {
  static const RationalField g1 = contract(v_field(1), ext_deriv(omega_tilde(1)));
  static const RationalField g2 = contract(v_field(2), ext_deriv(omega_tilde(1)));
  return i == 1 ? g1 : g2;
}

struct SingularFrame {
  Vec6 V1, V2;
  Alt w1, w2, g1, g2;
};

inline SingularFrame singular_frame(const Sl2Point& p) {
  const Vec6& x = p.coords();
  double r2 = r2_poly().eval<double>(x);
  if (!(r2 > 0)) throw Error(Errc::origin_singularity, "singular frame at 0");
  SingularFrame s;
  s.V1 = v_field(1).eval(x).as_vec();
  s.V2 = v_field(2).eval(x).as_vec();
  s.w1 = omega_tilde(1).eval(x);
  s.w2 = omega_tilde(2).eval(x);
  s.g1 = gamma_field(1).eval(x);
  s.g2 = gamma_field(2).eval(x);
  return s;
}

inline Mat6 matmul(const Mat6& a, const Mat6& b) {
  Mat6 r{};
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k)
      for (int j = 0; j < 6; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Vec6 matvec(const Mat6& a, const Vec6& v) {
  Vec6 r{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) r[i] += a[i][j] * v[j];
  return r;
}

// First-slot conventions: pi#(a)^j = a_i pi^{ij}, w_flat(v)_j = v_i w_{ij}.
inline Mat6 sharp_matrix(const Alt& pi) { return transpose(alt2_matrix(pi)); }
inline Mat6 flat_matrix(const Alt& w) { return transpose(alt2_matrix(w)); }

// w_flat applied to a bivector slotwise.
inline Alt flat_bivector(const Alt& w, const Alt& bivector) {
  Alt r = push(flat_matrix(w), bivector);
  r.var = Variance::form;
  return r;
}

struct FrameResiduals {
  double transversality = 0;  // max |df_j(V_i) - delta_ij|
  double sharp_flat_sharp = 0;  // max over i of |pi_i# w_i_flat pi_i# - pi_i#|
  double annihilation = 0;  // max |i_{V_j} w_i|
  double bivector_to_forms = 0;  // |w1_flat(pi1) + w1| and |w1_flat(pi2) - w2|
};

inline FrameResiduals frame_residuals(const Sl2Point& p) {
  auto s = singular_frame(p);
  const Vec6& x = p.coords();
  Alt df1 = evaluate(differential(f1_poly()), x), df2 = evaluate(differential(f2_poly()), x);
  FrameResiduals r;
  const Vec6* vs[2] = {&s.V1, &s.V2};
  const Alt* dfs[2] = {&df1, &df2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double v = evaluate(*dfs[j], {*vs[i]}) - (i == j ? 1.0 : 0.0);
      r.transversality = std::max(r.transversality, std::fabs(v));
    }
  Alt p1 = evaluate(pi1(), x), p2 = evaluate(pi2(), x);
  const Alt* ps[2] = {&p1, &p2};
  const Alt* ws[2] = {&s.w1, &s.w2};
  for (int i = 0; i < 2; ++i) {
    Mat6 sh = sharp_matrix(*ps[i]);
    Mat6 c = matmul(sh, matmul(flat_matrix(*ws[i]), sh));
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        r.sharp_flat_sharp = std::max(r.sharp_flat_sharp, std::fabs(c[a][b] - sh[a][b]));
    for (int j = 0; j < 2; ++j)
      r.annihilation = std::max(r.annihilation, contract(*vs[j], *ws[i]).max_abs());
  }
  r.bivector_to_forms = std::max((flat_bivector(s.w1, p1) + s.w1).max_abs(),
                                 (flat_bivector(s.w1, p2) - s.w2).max_abs());
  return r;
}

// ---------------------------------------------------------------------------
// Pointwise bigraded splitting of a multivector through the splitting
// sigma(Y) = i_Y omega~_1, with normal frame V1, V2 dual to df1, df2.

struct Bigraded {
  // For each (p,q): J-subset of {df1,df2} (bit 0 = df1) -> p-form on TM.
  std::map<std::pair<int, int>, std::map<int, Alt>> a;
  // Reconstructed multivector component b^{p,q}(a^{p,q}(X)).
  std::map<std::pair<int, int>, Alt> component;
};

namespace detail {

// Value of alternating k-tensor on a list of arguments (first slot first).
inline double eval_args(const Alt& t, const std::vector<Vec6>& args) { return evaluate(t, args); }

inline void shuffles(int p, int q, std::vector<std::pair<std::vector<int>, int>>& out) {
  int n = p + q;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (std::popcount(m) != p) continue;
    std::vector<int> perm;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1) perm.push_back(i);
    for (int i = 0; i < n; ++i)
      if (!(m >> i & 1)) perm.push_back(i);
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    out.push_back({perm, inv % 2 ? -1 : 1});
  }
}

}  // namespace detail

inline Bigraded bigrade_split(const Alt& xv, const Sl2Point& p) {
  if (xv.var != Variance::multivector) throw Error(Errc::variance_mismatch, "bigrade_split");
  auto s = singular_frame(p);
  const Vec6& x = p.coords();
  Vec6 df[2] = {evaluate(differential(f1_poly()), x).as_vec(),
                evaluate(differential(f2_poly()), x).as_vec()};
  Vec6 vv[2] = {s.V1, s.V2};
  Mat6 sigma = flat_matrix(s.w1);
  Mat6 sharp = sharp_matrix(evaluate(pi1(), x));
  int k = xv.deg;
  Bigraded out;
  const auto& tab = detail::subset_table();
  for (int q = 0; q <= std::min(k, 2); ++q) {
    int pp = k - q;
    if (pp > 4) continue;
    std::map<int, Alt> comps;
    for (int J : {0, 1, 2, 3}) {
      if (std::popcount(static_cast<unsigned>(J)) != q) continue;
      Alt form(Variance::form, pp);
      for (Mask m : tab.masks[pp]) {
        std::vector<Vec6> args;
        for (int t = 0; t < pp; ++t) {
          Vec6 e{};
          e[tab.idx[m][t]] = 1;
          args.push_back(matvec(sigma, e));
        }
        for (int j = 0; j < 2; ++j)
          if (J >> j & 1) args.push_back(df[j]);
        form.c[m] = evaluate(xv, args);
      }
      comps[J] = form;
    }
    // b^{p,q}: evaluate on basis covectors dx_S.
    Alt rec(Variance::multivector, k);
    std::vector<std::pair<std::vector<int>, int>> sh;
    detail::shuffles(pp, q, sh);
    for (Mask m : tab.masks[k]) {
      std::vector<Vec6> cov(k);
      for (int t = 0; t < k; ++t) {
        Vec6 e{};
        e[tab.idx[m][t]] = 1;
        cov[t] = e;
      }
      double val = 0;
      for (auto& [perm, sg] : sh) {
        std::vector<Vec6> ys;
        for (int t = 0; t < pp; ++t) ys.push_back(matvec(sharp, cov[perm[t]]));
        // kappa(X) in the df basis has coefficients X(V_i).
        for (auto& [J, form] : comps) {
          double fv = evaluate(form, ys);
          if (fv == 0) continue;
          double det = 1;
          if (q == 1) {
            int j = J == 1 ? 0 : 1;
            Vec6 c = cov[perm[pp]];
            double d = 0;
            for (int i = 0; i < 6; ++i) d += c[i] * vv[j][i];
            det = d;
          } else if (q == 2) {
            Vec6 c0 = cov[perm[pp]], c1 = cov[perm[pp + 1]];
            double a00 = 0, a01 = 0, a10 = 0, a11 = 0;
            for (int i = 0; i < 6; ++i) {
              a00 += c0[i] * vv[0][i];
              a01 += c1[i] * vv[0][i];
              a10 += c0[i] * vv[1][i];
              a11 += c1[i] * vv[1][i];
            }
            det = a00 * a11 - a01 * a10;
          }
          val += sg * det * fv;
        }
      }
      rec.c[m] = val;
    }
    out.a[{pp, q}] = comps;
    out.component[{pp, q}] = rec;
  }
  return out;
}

}  // namespace sl2pc
