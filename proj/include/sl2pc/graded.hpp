#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "detail/bits.hpp"
#include "errors.hpp"
#include "poly.hpp"

namespace sl2pc {

enum class Variance { multivector, form };

inline const char* variance_name(Variance v) {
  return v == Variance::form ? "form" : "multivector";
}

using Vec6 = std::array<double, 6>;
using Mat6 = std::array<std::array<double, 6>, 6>;

// Exact multivector field or differential form on R^6 with polynomial
// coefficients, keyed by sorted index subsets.
struct GradedField {
  Variance var = Variance::multivector;
  int deg = 0;
  std::map<Mask, Poly6, MaskLess> terms;

  GradedField() = default;
  GradedField(Variance v, int d) : var(v), deg(d) {}

  static GradedField scalar(Variance v, const Poly6& g) {
    GradedField r(v, 0);
    r.add(0, g);
    return r;
  }
  static GradedField basis(Variance v, Mask m, const Poly6& c = Poly6(1)) {
    GradedField r(v, popcount(m));
    r.add(m, c);
    return r;
  }

  void add(Mask m, const Poly6& c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) terms.emplace(m, c);
    else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  Poly6 coeff(Mask m) const {
    auto it = terms.find(m);
    return it == terms.end() ? Poly6() : it->second;
  }

  bool is_zero() const { return terms.empty(); }

  GradedField& operator+=(const GradedField& o) {
    check_same(o);
    for (auto& [m, c] : o.terms) add(m, c);
    return *this;
  }
  GradedField& operator-=(const GradedField& o) {
    check_same(o);
    for (auto& [m, c] : o.terms) add(m, -c);
    return *this;
  }
  friend GradedField operator+(GradedField a, const GradedField& b) { return a += b; }
  friend GradedField operator-(GradedField a, const GradedField& b) { return a -= b; }
  friend GradedField operator*(const Poly6& g, const GradedField& a) {
    GradedField r(a.var, a.deg);
    if (g.is_zero()) return r;
    for (auto& [m, c] : a.terms) r.add(m, g * c);
    return r;
  }
  friend GradedField operator*(const Rational& s, const GradedField& a) {
    return Poly6(s) * a;
  }
  friend bool operator==(const GradedField& a, const GradedField& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.var == b.var && a.deg == b.deg && a.terms == b.terms;
  }

  friend std::ostream& operator<<(std::ostream& os, const GradedField& g) { return os << g.str(); }

  // Canonical text: sorted keys, exact rationals p/q.
  std::string str() const {
    std::ostringstream os;
    os << variance_name(var) << " deg " << deg << " {";
    bool first = true;
    for (auto& [m, c] : terms) {
      os << (first ? "" : "; ") << "[" << mask_string(m) << "] " << c.str(coord_names());
      first = false;
    }
    os << "}";
    return os.str();
  }

 private:
  void check_same(const GradedField& o) const {
    if (o.is_zero() || is_zero()) return;
    if (o.var != var) throw Error(Errc::variance_mismatch, "sum of different variances");
    if (o.deg != deg) throw Error(Errc::degree_overflow, "sum of different degrees");
  }
};

inline GradedField wedge(const GradedField& p, const GradedField& q) {
  if (p.var != q.var) throw Error(Errc::variance_mismatch, "wedge");
  if (p.deg + q.deg > 6) throw Error(Errc::degree_overflow, "wedge");
  GradedField r(p.var, p.deg + q.deg);
  for (auto& [a, ca] : p.terms)
    for (auto& [b, cb] : q.terms) {
      int s = wedge_sign(a, b);
      if (s) r.add(a | b, Rational(s) * (ca * cb));
    }
  return r;
}

// First-slot contraction of a degree-1 element of the opposite variance:
// i_a P = sum_pos (-1)^pos a_{k[pos]} P_k.
inline GradedField contract(const GradedField& a, const GradedField& p) {
  if (a.var == p.var) throw Error(Errc::variance_mismatch, "contract needs dual variances");
  if (a.deg != 1) throw Error(Errc::degree_overflow, "contract expects a degree-1 argument");
  GradedField r(p.var, std::max(p.deg - 1, 0));
  for (auto& [m, c] : p.terms)
    for (auto& [am, ac] : a.terms) {
      int i = std::countr_zero(static_cast<unsigned>(am));
      if (!(m >> i & 1)) continue;
      int pos = position_in(m, i);
      r.add(static_cast<Mask>(m & ~am), Rational(pos % 2 ? -1 : 1) * (ac * c));
    }
  return r;
}

inline GradedField differential(const Poly6& g) {
  GradedField r(Variance::form, 1);
  for (int i = 0; i < 6; ++i) r.add(static_cast<Mask>(1u << i), g.diff(i));
  return r;
}

inline GradedField ext_deriv(const GradedField& w) {
  if (w.var != Variance::form) throw Error(Errc::variance_mismatch, "ext_deriv on a multivector");
  if (w.deg >= 6) return GradedField(Variance::form, w.deg + 1 > 6 ? 6 : w.deg + 1);
  GradedField r(Variance::form, w.deg + 1);
  for (auto& [m, c] : w.terms)
    for (int i = 0; i < 6; ++i) {
      Mask e = static_cast<Mask>(1u << i);
      int s = wedge_sign(e, m);
      if (s) r.add(e | m, Rational(s) * c.diff(i));
    }
  return r;
}

inline GradedField partial(const GradedField& p, int i) {
  GradedField r(p.var, p.deg);
  for (auto& [m, c] : p.terms) r.add(m, c.diff(i));
  return r;
}

// Right derivative with respect to the odd generator xi_i.
inline GradedField right_xi_derivative(const GradedField& p, int i) {
  GradedField r(p.var, std::max(p.deg - 1, 0));
  for (auto& [m, c] : p.terms) {
    if (!(m >> i & 1)) continue;
    int pos = position_in(m, i);
    int sgn = ((popcount(m) - 1 - pos) % 2) ? -1 : 1;
    r.add(static_cast<Mask>(m & ~(1u << i)), Rational(sgn) * c);
  }
  return r;
}

// Schouten-Nijenhuis bracket, superfunction form:
// [P,Q] = sum_i (P d/dxi_i) ^ dQ/dx_i - (-1)^{(p-1)(q-1)} (Q d/dxi_i) ^ dP/dx_i
inline GradedField schouten(const GradedField& p, const GradedField& q) {
  if (p.var != Variance::multivector || q.var != Variance::multivector)
    throw Error(Errc::variance_mismatch, "schouten on forms");
  int deg = p.deg + q.deg - 1;
  if (deg > 6) throw Error(Errc::degree_overflow, "schouten");
  GradedField r(Variance::multivector, std::max(deg, 0));
  if (deg < 0) return r;
  Rational sgn = ((p.deg - 1) * (q.deg - 1)) % 2 ? -1 : 1;
  for (int i = 0; i < 6; ++i) {
    if (p.deg > 0) {
      auto a = right_xi_derivative(p, i);
      if (!a.is_zero()) r += wedge(a, partial(q, i));
    }
    if (q.deg > 0) {
      auto b = right_xi_derivative(q, i);
      if (!b.is_zero()) r -= sgn * wedge(b, partial(p, i));
    }
  }
  r.deg = deg;
  return r;
}

inline GradedField lichnerowicz(const GradedField& pi, const GradedField& p) {
  if (pi.deg != 2 || !schouten(pi, pi).is_zero())
    throw Error(Errc::not_poisson, "[pi,pi] != 0");
  return schouten(pi, p);
}

// Poisson structure with [pi,pi] = 0 verified once at construction.
class PoissonStructure {
 public:
  explicit PoissonStructure(GradedField pi) : pi_(std::move(pi)) {
    if (pi_.deg != 2 || !schouten(pi_, pi_).is_zero())
      throw Error(Errc::not_poisson, "[pi,pi] != 0");
  }
  GradedField d(const GradedField& p) const { return schouten(pi_, p); }
  // {g,h} = pi(dg,dh)
  Poly6 bracket(const Poly6& g, const Poly6& h) const {
    Poly6 s;
    for (auto& [m, c] : pi_.terms) {
      auto ix = mask_indices(m);
      s += c * (g.diff(ix[0]) * h.diff(ix[1]) - g.diff(ix[1]) * h.diff(ix[0]));
    }
    return s;
  }
  const GradedField& pi() const { return pi_; }

 private:
  GradedField pi_;
};

// ---------------------------------------------------------------------------
// Pointwise numeric alternating tensors (value of a field at one point).

struct Alt {
  Variance var = Variance::form;
  int deg = 0;
  std::array<double, 64> c{};

  Alt() = default;
  Alt(Variance v, int d) : var(v), deg(d) {}

  double& operator[](Mask m) { return c[m]; }
  double operator[](Mask m) const { return c[m]; }

  Alt& operator+=(const Alt& o) { for (int i = 0; i < 64; ++i) c[i] += o.c[i]; return *this; }
  Alt& operator-=(const Alt& o) { for (int i = 0; i < 64; ++i) c[i] -= o.c[i]; return *this; }
  Alt& operator*=(double s) { for (auto& v : c) v *= s; return *this; }
  friend Alt operator+(Alt a, const Alt& b) { return a += b; }
  friend Alt operator-(Alt a, const Alt& b) { return a -= b; }
  friend Alt operator*(double s, Alt a) { return a *= s; }

  double max_abs() const {
    double m = 0;
    for (double v : c) m = std::max(m, std::fabs(v));
    return m;
  }

  static Alt vector(Variance v, const Vec6& x) {
    Alt a(v, 1);
    for (int i = 0; i < 6; ++i) a.c[1u << i] = x[i];
    return a;
  }
  Vec6 as_vec() const {
    Vec6 x{};
    for (int i = 0; i < 6; ++i) x[i] = c[1u << i];
    return x;
  }
};

inline Alt wedge(const Alt& a, const Alt& b) {
  Alt r(a.var, a.deg + b.deg);
  for (unsigned s = 0; s < 64; ++s) {
    if (a.c[s] == 0) continue;
    for (unsigned t = 0; t < 64; ++t) {
      if (b.c[t] == 0) continue;
      int sg = wedge_sign(static_cast<Mask>(s), static_cast<Mask>(t));
      if (sg) r.c[s | t] += sg * a.c[s] * b.c[t];
    }
  }
  return r;
}

// First-slot contraction by a vector (or covector) v.
inline Alt contract(const Vec6& v, const Alt& p) {
  Alt r(p.var, std::max(p.deg - 1, 0));
  for (unsigned m = 0; m < 64; ++m) {
    if (p.c[m] == 0) continue;
    int pos = 0;
    for (int i = 0; i < 6; ++i) {
      if (!(m >> i & 1)) continue;
      r.c[m & ~(1u << i)] += (pos % 2 ? -1.0 : 1.0) * v[i] * p.c[m];
      ++pos;
    }
  }
  return r;
}

// Evaluate a degree-k tensor on k vectors (slots contracted in order).
inline double evaluate(const Alt& a, const std::vector<Vec6>& vs) {
  Alt cur = a;
  for (auto& v : vs) cur = contract(v, cur);
  return cur.c[0];
}

inline double minor_det(const Mat6& l, const int* rows, const int* cols, int k) {
  double m[6][6];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m[i][j] = l[rows[i]][cols[j]];
  double det = 1;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) return 0;
    if (piv != c) {
      for (int j = 0; j < k; ++j) std::swap(m[piv][j], m[c][j]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < k; ++r) {
      double f = m[r][c] / m[c][c];
      for (int j = c; j < k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

namespace detail {
struct SubsetTable {
  std::array<std::vector<Mask>, 7> masks;
  std::array<std::array<int, 6>, 64> idx{};
  SubsetTable() {
    for (int k = 0; k <= 6; ++k) masks[k] = subsets(6, k);
    for (unsigned m = 0; m < 64; ++m) {
      int n = 0;
      for (int i = 0; i < 6; ++i)
        if (m >> i & 1) idx[m][n++] = i;
    }
  }
};
inline const SubsetTable& subset_table() {
  static const SubsetTable t;
  return t;
}
}  // namespace detail

// Induced map on the k-th exterior power: (L e_S) = sum_T det L[T,S] e_T.
inline Alt push(const Mat6& l, const Alt& a) {
  Alt r(a.var, a.deg);
  if (a.deg == 0) { r.c[0] = a.c[0]; return r; }
  const auto& tab = detail::subset_table();
  const auto& ks = tab.masks[a.deg];
  for (Mask s : ks) {
    if (a.c[s] == 0) continue;
    for (Mask t : ks)
      r.c[t] += a.c[s] * minor_det(l, tab.idx[t].data(), tab.idx[s].data(), a.deg);
  }
  return r;
}

inline Mat6 transpose(const Mat6& m) {
  Mat6 t{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) t[i][j] = m[j][i];
  return t;
}

// Pullback of a form through a linear map with Jacobian j (target x source).
inline Alt pull(const Mat6& j, const Alt& a) { return push(transpose(j), a); }

inline Alt evaluate(const GradedField& g, const Vec6& x) {
  Alt r(g.var, g.deg);
  for (auto& [m, c] : g.terms) r.c[m] = c.eval<double>(x);
  return r;
}

// Bivector or 2-form as the antisymmetric matrix M[i][j] = coefficient of e_i^e_j.
inline Mat6 alt2_matrix(const Alt& a) {
  Mat6 m{};
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      m[i][j] = a.c[(1u << i) | (1u << j)];
      m[j][i] = -m[i][j];
    }
  return m;
}

inline Alt matrix_alt2(Variance v, const Mat6& m) {
  Alt a(v, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) a.c[(1u << i) | (1u << j)] = m[i][j];
  return a;
}

// Singular field given by a point-callable; evaluation on the declared
// locus is refused.
struct CallableField {
  enum class Locus { none, origin, cone };
  Variance var = Variance::form;
  int deg = 0;
  Locus locus = Locus::none;
  std::function<Alt(const Vec6&)> fn;
};

inline GradedField ext_deriv(const CallableField&) {
  throw Error(Errc::numeric_coeff, "exact d on a callable field");
}
inline GradedField schouten(const CallableField&, const CallableField&) {
  throw Error(Errc::numeric_coeff, "exact schouten on a callable field");
}

}  // namespace sl2pc
