#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graded.hpp"
#include "objects.hpp"
#include "poly.hpp"

namespace sl2pc {

// rho = R^2 on sl2(C) (6 variables), |z|^2 on C (2 variables).
template <int N>
const Poly<N>& flat_rho() {
  static const Poly<N> r = [] {
    if constexpr (N == 6) return r2_poly();
    else {
      Poly<N> s;
      for (int i = 0; i < N; ++i) s += Poly<N>::var(i) * Poly<N>::var(i);
      return s;
    }
  }();
  return r;
}

// exp(-c/rho) P / rho^m, and 0 at rho = 0.
template <int N>
class FlatFunction {
 public:
  FlatFunction() : FlatFunction(1, Poly<N>(), 0) {}
  FlatFunction(Rational c, Poly<N> p, int m) : c_(std::move(c)), p_(std::move(p)), m_(m) {
    if (c_ <= 0) throw std::invalid_argument("flat decay rate must be positive");
    if (m_ < 0) throw std::invalid_argument("flat pole order must be >= 0");
    pc_ = p_.compile();
    cd_ = c_.get_d();
  }

  const Rational& c() const { return c_; }
  const Poly<N>& P() const { return p_; }
  int m() const { return m_; }
  bool is_zero() const { return p_.is_zero(); }

  double operator()(const double* x) const {
    double r = 0;
    for (int i = 0; i < N; ++i) r += x[i] * x[i];
    if constexpr (N == 6) r *= 2;
    if (r == 0 || p_.is_zero()) return 0;
    return std::exp(-cd_ / r - m_ * std::log(r)) * pc_(x);
  }
  double operator()(const std::array<double, N>& x) const { return (*this)(x.data()); }

  // |x|^-k times the value, in log form so large k near 0 stays finite.
  double weighted(const double* x, double k) const {
    double e2 = 0;
    for (int i = 0; i < N; ++i) e2 += x[i] * x[i];
    double r = N == 6 ? 2 * e2 : e2;
    if (r == 0 || p_.is_zero()) return 0;
    return std::exp(-cd_ / r - m_ * std::log(r) - 0.5 * k * std::log(e2)) * pc_(x);
  }

  // d/dx_j stays in the family: P -> c rho_j P + rho^2 P_j - m rho rho_j P, m -> m + 2.
  FlatFunction diff(int j) const {
    const Poly<N>& rho = flat_rho<N>();
    Poly<N> rj = rho.diff(j);
    Poly<N> q = c_ * (rj * p_) + rho * rho * p_.diff(j) - Rational(m_) * (rho * rj * p_);
    return FlatFunction(c_, q, m_ + 2);
  }

  FlatFunction operator*(const Poly<N>& g) const { return FlatFunction(c_, p_ * g, m_); }
  FlatFunction scaled(const Rational& s) const { return FlatFunction(c_, s * p_, m_); }

 private:
  Rational c_;
  Poly<N> p_;
  int m_;
  CompiledPoly<N> pc_;
  double cd_ = 1;
};

using Flat6 = FlatFunction<6>;
using Flat2 = FlatFunction<2>;

// Differential form on sl2(C) with coefficients sums of flat functions.
struct FlatForm {
  int deg = 0;
  std::map<Mask, std::vector<Flat6>, MaskLess> terms;

  void add(Mask m, const Flat6& f) {
    if (!f.is_zero()) terms[m].push_back(f);
  }

  Alt eval(const Vec6& x) const {
    Alt a(Variance::form, deg);
    for (auto& [m, fs] : terms)
      for (auto& f : fs) a.c[m] += f(x);
    return a;
  }

  FlatForm ext_deriv() const {
    FlatForm r;
    r.deg = deg + 1;
    for (auto& [m, fs] : terms)
      for (int j = 0; j < 6; ++j) {
        if (m >> j & 1) continue;
        Mask e = static_cast<Mask>(1u << j);
        int s = wedge_sign(e, m);
        for (auto& f : fs) r.add(e | m, f.diff(j).scaled(Rational(s)));
      }
    return r;
  }

  FlatForm scaled(const Rational& s) const {
    FlatForm r;
    r.deg = deg;
    for (auto& [m, fs] : terms)
      for (auto& f : fs) r.add(m, f.scaled(s));
    return r;
  }
};

// Polynomial form wedge flat form, e.g. phi ^ beta.
inline FlatForm wedge(const GradedField& g, const FlatForm& b) {
  if (g.var != Variance::form) throw Error(Errc::variance_mismatch, "wedge of form with multivector");
  FlatForm r;
  r.deg = g.deg + b.deg;
  if (r.deg > 6) throw Error(Errc::degree_overflow, "wedge degree");
  for (auto& [s, p] : g.terms)
    for (auto& [t, fs] : b.terms) {
      int sg = wedge_sign(s, t);
      if (!sg) continue;
      for (auto& f : fs) r.add(s | t, (f * p).scaled(Rational(sg)));
    }
  return r;
}

// ---------------------------------------------------------------------------
// The canonical family, stored as data with exact rationals.

struct NamedFlatForm {
  std::string name;
  FlatForm form;
};

inline Poly6 poly_from_json(const nlohmann::json& j) {
  Poly6 p;
  for (auto& t : j) {
    Exponent<6> e{};
    for (int i = 0; i < 6; ++i) e[i] = static_cast<std::uint8_t>(t[1][i].get<int>());
    p.add_term(e, Rational(t[0].get<std::string>()));
  }
  return p;
}

inline std::vector<NamedFlatForm> parse_flat_family(const nlohmann::json& doc) {
  std::vector<NamedFlatForm> out;
  for (auto& f : doc.at("forms")) {
    NamedFlatForm nf;
    nf.name = f.at("name").get<std::string>();
    nf.form.deg = f.at("degree").get<int>();
    for (auto& t : f.at("terms")) {
      Mask m = 0;
      for (int i : t.at("slots")) m |= static_cast<Mask>(1u << i);
      if (popcount(m) != nf.form.deg) throw Error(Errc::config_invalid, "flat family slot count");
      Rational c(t.at("c").get<std::string>());
      c.canonicalize();
      nf.form.add(m, Flat6(c, poly_from_json(t.at("poly")), t.at("m").get<int>()));
    }
    out.push_back(std::move(nf));
  }
  return out;
}

#ifdef SL2PC_SOURCE_DIR
inline std::string default_flat_family_path() { return std::string(SL2PC_SOURCE_DIR) + "/data/flat_family.json"; }
#else
inline std::string default_flat_family_path() { return "data/flat_family.json"; }
#endif

inline std::vector<NamedFlatForm> load_flat_family(const std::string& path = default_flat_family_path()) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_invalid, "cannot open " + path);
  try {
    return parse_flat_family(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, e.what());
  }
}

}  // namespace sl2pc
