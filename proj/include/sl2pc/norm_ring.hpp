#pragma once

#include <cmath>
#include <utility>

#include "errors.hpp"
#include "poly.hpp"

namespace sl2pc {

// Q[x,y,s]/(s^2 - x^2 - y^2), s standing for |z|, with an optional
// denominator (2s)^k. Numerators are kept with s-degree <= 1.
class NormRingElem {
 public:
  enum { X = 0, Y = 1, S = 2 };

  NormRingElem() = default;
  NormRingElem(long c) : num_(c) {}
  explicit NormRingElem(Poly3 p, int k = 0) : num_(reduce(p)), k_(k) {
    if (k < 0) throw std::invalid_argument("negative denominator power");
  }

  static NormRingElem x() { return NormRingElem(Poly3::var(X)); }
  static NormRingElem y() { return NormRingElem(Poly3::var(Y)); }
  static NormRingElem s() { return NormRingElem(Poly3::var(S)); }

  const Poly3& num() const { return num_; }
  int k() const { return k_; }
  bool is_zero() const { return num_.is_zero(); }

  // s^e -> s^(e mod 2) (x^2 + y^2)^(e div 2)
  static Poly3 reduce(const Poly3& p) {
    static const Poly3 q = Poly3::var(X) * Poly3::var(X) + Poly3::var(Y) * Poly3::var(Y);
    Poly3 r;
    for (auto& [m, c] : p.terms()) {
      if (m[S] < 2) {
        r.add_term(m, c);
        continue;
      }
      auto low = m;
      low[S] = static_cast<std::uint8_t>(m[S] % 2);
      r += Poly3::monomial(low, c) * q.pow(m[S] / 2);
    }
    return r;
  }

  // multiply numerator by (2s)^j and raise the denominator to match
  NormRingElem lifted(int j) const {
    NormRingElem r;
    r.num_ = reduce(num_ * (Rational(2) * Poly3::var(S)).pow(j));
    r.k_ = k_ + j;
    return r;
  }

  friend NormRingElem operator+(const NormRingElem& a, const NormRingElem& b) {
    int k = std::max(a.k_, b.k_);
    NormRingElem r = a.lifted(k - a.k_);
    r.num_ += b.lifted(k - b.k_).num_;
    return r;
  }
  friend NormRingElem operator-(const NormRingElem& a) {
    NormRingElem r = a;
    r.num_ *= Rational(-1);
    return r;
  }
  friend NormRingElem operator-(const NormRingElem& a, const NormRingElem& b) { return a + (-b); }
  friend NormRingElem operator*(const NormRingElem& a, const NormRingElem& b) {
    NormRingElem r;
    r.num_ = reduce(a.num_ * b.num_);
    r.k_ = a.k_ + b.k_;
    return r;
  }

  // exact equality in the fraction field: cross-multiply denominators
  friend bool operator==(const NormRingElem& a, const NormRingElem& b) { return (a - b).is_zero(); }

  // Ring derivation with d/dx s = x/s, d/dy s = y/s.
  // d(P/(2s)^k) = ((2s P_x + 2x P_s) 2s - 4 k x P) / (2s)^(k+2) for i = X.
  NormRingElem diff(int i) const {
    Poly3 v = Poly3::var(i);
    Poly3 two_s = Rational(2) * Poly3::var(S);
    Poly3 d = two_s * num_.diff(i) + Rational(2) * v * num_.diff(S);
    Poly3 n = d * two_s - Rational(4 * k_) * v * num_;
    return NormRingElem(n, k_ + 2);
  }

  double eval(double xv, double yv) const {
    double sv = std::hypot(xv, yv);
    double n = num_.eval<double>({xv, yv, sv});
    return k_ ? n / std::pow(2 * sv, k_) : n;
  }

 private:
  Poly3 num_;
  int k_ = 0;
};

using RingPair = std::pair<NormRingElem, NormRingElem>;

// M: y g1 + (s + x) g2 = 0
inline bool membership_M(const NormRingElem& g1, const NormRingElem& g2) {
  using R = NormRingElem;
  return (R::y() * g1 + (R::s() + R::x()) * g2).is_zero();
}

// K: y g1 = (s - x) g2
inline bool membership_K(const NormRingElem& g1, const NormRingElem& g2) {
  using R = NormRingElem;
  return (R::y() * g1 - (R::s() - R::x()) * g2).is_zero();
}

inline RingPair J(const RingPair& g) { return {-g.second, g.first}; }

struct MKSplit {
  RingPair m, k;
};

inline MKSplit project_MK(const NormRingElem& g1, const NormRingElem& g2) {
  using R = NormRingElem;
  R x = R::x(), y = R::y(), s = R::s();
  R inv(Poly3(1), 1);  // 1/(2s)
  MKSplit r;
  r.m = {inv * ((s + x) * g1 - y * g2), inv * (-(y * g1) + (s - x) * g2)};
  r.k = {inv * ((s - x) * g1 + y * g2), inv * (y * g1 + (s + x) * g2)};
  return r;
}

// Vector field a d/dx + b d/dy on C minus the origin.
struct RingField {
  NormRingElem a, b;

  NormRingElem apply(const NormRingElem& g) const { return a * g.diff(NormRingElem::X) + b * g.diff(NormRingElem::Y); }
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
};

inline RingField bracket(const RingField& u, const RingField& v) {
  return {u.apply(v.a) - v.apply(u.a), u.apply(v.b) - v.apply(u.b)};
}

inline RingField y1_field() {
  using R = NormRingElem;
  return {-R::y(), R::s() + R::x()};
}
inline RingField y2_field() {
  using R = NormRingElem;
  return {R::s() - R::x(), -R::y()};
}

// ([Y1,Y2] - Y2, (s - x) Y1 + y Y2)
inline std::pair<RingField, RingField> y_field_relations() {
  using R = NormRingElem;
  RingField y1 = y1_field(), y2 = y2_field();
  RingField br = bracket(y1, y2);
  RingField r1{br.a - y2.a, br.b - y2.b};
  R c = R::s() - R::x();
  RingField r2{c * y1.a + R::y() * y2.a, c * y1.b + R::y() * y2.b};
  return {r1, r2};
}

// What the bracket actually equals: [Y1,Y2] = -Y1.
inline RingField y_bracket_corrected_residual() {
  RingField y1 = y1_field(), br = bracket(y1, y2_field());
  return {br.a + y1.a, br.b + y1.b};
}

// ---------------------------------------------------------------------------
// Parity decomposition on C: sigma = -id, tau = conjugation.

struct Eigenparts {
  Poly2 g0, gx, gy, gxy;
};

inline Poly2 pull_sigma(const Poly2& g) { return g.compose<2>({-Poly2::var(0), -Poly2::var(1)}); }
inline Poly2 pull_tau(const Poly2& g) { return g.compose<2>({Poly2::var(0), -Poly2::var(1)}); }

inline Eigenparts eigenspace_decompose(const Poly2& g) {
  Poly2 sg = pull_sigma(g), tg = pull_tau(g), stg = pull_sigma(tg);
  Rational q(1, 4);
  // (1 +- sigma)(1 +- tau) g / 4
  Poly2 pp = q * (g + sg + tg + stg);
  Poly2 mp = q * (g - sg + tg - stg);
  Poly2 mm = q * (g - sg - tg + stg);
  Poly2 pm = q * (g + sg - tg - stg);
  Eigenparts r;
  r.g0 = pp;
  if (!mp.divide_monomial({1, 0}, r.gx) || !mm.divide_monomial({0, 1}, r.gy) ||
      !pm.divide_monomial({1, 1}, r.gxy))
    throw Error(Errc::division_fails, "parity component not divisible");
  return r;
}

// g o sq with sq(l) = l^2
inline Poly2 sq_transport(const Poly2& g) {
  Poly2 l1 = Poly2::var(0), l2 = Poly2::var(1);
  return g.compose<2>({l1 * l1 - l2 * l2, Rational(2) * l1 * l2});
}

// Norm-ring numerator pulled back by sq: x -> l1^2 - l2^2, y -> 2 l1 l2, s -> l1^2 + l2^2.
// The (2s)^k denominator becomes (2 |l|^2)^k and is reported separately.
inline Poly2 sq_transport(const NormRingElem& g) {
  Poly2 l1 = Poly2::var(0), l2 = Poly2::var(1);
  return g.num().compose<2>({l1 * l1 - l2 * l2, Rational(2) * l1 * l2, l1 * l1 + l2 * l2});
}

// (g1, g2) -> -l1 g1 o sq + l2 g2 o sq; inputs must be denominator-free
inline Poly2 odd_lift(const NormRingElem& g1, const NormRingElem& g2) {
  if (g1.k() || g2.k()) throw std::invalid_argument("odd_lift needs denominator-free input");
  Poly2 l1 = Poly2::var(0), l2 = Poly2::var(1);
  return l2 * sq_transport(g2) - l1 * sq_transport(g1);
}

}  // namespace sl2pc
