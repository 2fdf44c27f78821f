#pragma once

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sl2pc {

using Rational = mpq_class;

inline std::string rat_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

template <int N>
using Exponent = std::array<std::uint8_t, N>;

template <int N>
int total_degree(const Exponent<N>& a) {
  int d = 0;
  for (auto e : a) d += e;
  return d;
}

// Graded lex: lower total degree first, then x1 heavier first.
template <int N>
struct GrlexLess {
  bool operator()(const Exponent<N>& a, const Exponent<N>& b) const {
    int da = total_degree<N>(a), db = total_degree<N>(b);
    if (da != db) return da < db;
    return a > b;
  }
};

template <int N>
class CompiledPoly;

// Exact polynomial in N variables with rational coefficients. Zero
// coefficients are never stored.
template <int N>
class Poly {
 public:
  using Mono = Exponent<N>;
  using Terms = std::map<Mono, Rational, GrlexLess<N>>;

  Poly() = default;
  Poly(long c) { if (c != 0) terms_[Mono{}] = c; }
  Poly(const Rational& c) { add_term(Mono{}, c); }

  static Poly var(int i) {
    Poly p;
    Mono m{};
    m[i] = 1;
    p.terms_[m] = 1;
    return p;
  }
  static Poly monomial(const Mono& m, const Rational& c = 1) {
    Poly p;
    p.add_term(m, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  int degree() const {
    int d = -1;
    for (auto& [m, c] : terms_) d = std::max(d, total_degree<N>(m));
    return d;
  }
  bool is_homogeneous(int d) const {
    for (auto& [m, c] : terms_)
      if (total_degree<N>(m) != d) return false;
    return true;
  }

  Rational coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Mono& m, Rational c) {
    if (c.get_den() != 1) c.canonicalize();
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const Rational& s) {
    if (s == 0) { terms_.clear(); return *this; }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a.terms_)
      for (auto& [mb, cb] : b.terms_) {
        Mono m;
        for (int i = 0; i < N; ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
        r.add_term(m, ca * cb);
      }
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly pow(unsigned e) const {
    Poly r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  // Plain partial derivative.
  Poly diff(int i) const {
    Poly r;
    for (auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      Mono k = m;
      --k[i];
      r.add_term(k, c * m[i]);
    }
    return r;
  }

  template <class T>
  T eval(const std::array<T, N>& x) const {
    T s = T(0);
    for (auto& [m, c] : terms_) {
      T t = to_scalar<T>(c);
      for (int i = 0; i < N; ++i)
        for (int e = 0; e < m[i]; ++e) t *= x[i];
      s += t;
    }
    return s;
  }

  // Substitute polynomials (in M variables) for the N variables.
  template <int M>
  Poly<M> compose(const std::array<Poly<M>, N>& sub) const {
    Poly<M> r;
    for (auto& [m, c] : terms_) {
      Poly<M> t(c);
      for (int i = 0; i < N; ++i)
        if (m[i]) t *= sub[i].pow(m[i]);
      r += t;
    }
    return r;
  }

  // Exact division by a single monomial; false if some term is not divisible.
  bool divide_monomial(const Mono& d, Poly& out) const {
    out = Poly();
    for (auto& [m, c] : terms_) {
      Mono k = m;
      for (int i = 0; i < N; ++i) {
        if (k[i] < d[i]) return false;
        k[i] = static_cast<std::uint8_t>(k[i] - d[i]);
      }
      out.terms_[k] = c;
    }
    return true;
  }

  std::string str(const std::array<const char*, N>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << rat_string(c);
      for (int i = 0; i < N; ++i)
        if (m[i]) {
          os << "*" << names[i];
          if (m[i] > 1) os << "^" << int(m[i]);
        }
    }
    return os.str();
  }

  CompiledPoly<N> compile() const;

 private:
  template <class T>
  static T to_scalar(const Rational& c) {
    if constexpr (std::is_same_v<T, Rational>) return c;
    else return T(c.get_d());
  }

  Terms terms_;
};

// Double-precision snapshot of a Poly for fast repeated evaluation.
template <int N>
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Poly<N>& p) {
    for (auto& [m, c] : p.terms()) terms_.push_back({c.get_d(), m});
  }
  double operator()(const double* x) const {
    double s = 0;
    for (auto& [c, m] : terms_) {
      double t = c;
      for (int i = 0; i < N; ++i)
        for (int e = 0; e < m[i]; ++e) t *= x[i];
      s += t;
    }
    return s;
  }
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<std::pair<double, Exponent<N>>> terms_;
};

template <int N>
CompiledPoly<N> Poly<N>::compile() const { return CompiledPoly<N>(*this); }

using Poly6 = Poly<6>;
using Poly2 = Poly<2>;
using Poly3 = Poly<3>;

inline const std::array<const char*, 6>& coord_names() {
  static const std::array<const char*, 6> n{"x1", "y1", "x2", "y2", "x3", "y3"};
  return n;
}

// Coordinate functions on R^6 in the order (x1,y1,x2,y2,x3,y3).
inline Poly6 X(int j) { return Poly6::var(2 * (j - 1)); }
inline Poly6 Y(int j) { return Poly6::var(2 * (j - 1) + 1); }

}  // namespace sl2pc
