#include <gtest/gtest.h>

#include "sl2pc/flow.hpp"
#include "sl2pc/skeleton.hpp"

using namespace sl2pc;

namespace {

const cx I(0, 1);

DesingPoint random_desing(Rng& g, double scale = 1.5) {
  return {random_unit3(g), cx(scale * gaussian(g), scale * gaussian(g))};
}

}  // namespace

TEST(Rho, Examples) {
  auto a = rho({{1, 0, 0}, 2});
  EXPECT_LE((a.matrix() - Mat2{2.0 * I, 0, 0, -2.0 * I}).max_abs(), 0);
  EXPECT_EQ(invariants(a).f, cx(4));
  auto b = rho({{0, 0, 1}, I});
  EXPECT_EQ(b.coords()[5], 1);
  EXPECT_NEAR(std::abs(invariants(b).f - cx(-1)), 0, 1e-15);
  EXPECT_THROW(rho({{1, 1, 0}, 1}), Error);
}

TEST(Rho, NormalCasimirAndZ2) {
  Rng g(31);
  for (int n = 0; n < 1000; ++n) {
    auto d = random_desing(g);
    auto p = rho(d);
    double l2 = std::norm(d.lambda);
    auto s = invariants(p);
    EXPECT_LE(std::abs(s.f - d.lambda * d.lambda), 1e-12 * (1 + l2));
    EXPECT_LE(skeleton_gap(p), 1e-10 * (1 + l2));
    EXPECT_NEAR(s.R2, 2 * l2, 1e-12 * (1 + l2));
    DesingPoint m{{-d.w[0], -d.w[1], -d.w[2]}, -d.lambda};
    auto q = rho(m);
    for (int i = 0; i < 6; ++i) EXPECT_EQ(q.coords()[i], p.coords()[i]);
    EXPECT_LE((retract(p).matrix() - p.matrix()).norm(), 1e-10 * (1 + l2));
  }
}

TEST(RhoJacobian, ColumnsAndRank) {
  auto j = rho_jacobian({{1, 0, 0}, 1});
  EXPECT_EQ(j[2][0], 1);
  for (int k = 1; k < 6; ++k) EXPECT_EQ(j[2][k], 0);
  Rng g(32);
  for (int n = 0; n < 200; ++n) {
    auto d = random_desing(g);
    EXPECT_EQ(jacobian_rank(rho_jacobian(d)), 4);
    d.lambda = 0;
    EXPECT_EQ(jacobian_rank(rho_jacobian(d)), 2);
  }
}

TEST(RhoJacobian, MatchesFiniteDifferences) {
  Rng g(33);
  for (int n = 0; n < 100; ++n) {
    auto d = random_desing(g);
    auto c = s2_chart(d.w);
    auto j = rho_jacobian(d);
    double h = 1e-6;
    auto along = [&](int a, double s) {
      DesingPoint e = d;
      if (a < 2) {
        const R3& t = a == 0 ? c.u : c.v;
        for (int k = 0; k < 3; ++k) e.w[k] = std::cos(s) * d.w[k] + std::sin(s) * t[k];
      } else {
        e.lambda += a == 2 ? cx(s) : cx(0, s);
      }
      return rho(e).coords();
    };
    for (int a = 0; a < 4; ++a) {
      auto p = along(a, h), m = along(a, -h);
      for (int k = 0; k < 6; ++k) EXPECT_NEAR(j[a][k], (p[k] - m[k]) / (2 * h), 1e-8);
    }
  }
}

TEST(Pullback, PhiExamples) {
  EXPECT_LE(pullback_identity_phi({{1, 0, 0}, 1}), 1e-14);
  auto j = rho_jacobian({{1, 0, 0}, 1});
  Alt phi = evaluate(phi_form(), rho({{1, 0, 0}, 1}).coords());
  EXPECT_NEAR(evaluate(phi, {j[2], j[3]}), 4, 1e-14);
  EXPECT_EQ(pullback_identity_phi({{0, 1, 0}, 0}), 0);
  EXPECT_NEAR(evaluate(phi, {j[0], j[1]}), 0, 1e-14);
}

TEST(Pullback, PhiSweep) {
  Rng g(34);
  for (int n = 0; n < 1000; ++n) {
    auto d = random_desing(g);
    double l2 = std::norm(d.lambda);
    EXPECT_LE(pullback_identity_phi(d), 1e-11 * (1 + l2 * l2));
  }
}

TEST(Pullback, OmegaExamples) {
  auto j = rho_jacobian({{0, 0, 1}, 1});
  Alt w1 = omega_tilde(1).eval(rho({{0, 0, 1}, 1}).coords());
  EXPECT_NEAR(evaluate(w1, {j[0], j[1]}), -1, 1e-14);
  auto ji = rho_jacobian({{0, 0, 1}, I});
  Alt wi = omega_tilde(1).eval(rho({{0, 0, 1}, I}).coords());
  EXPECT_NEAR(evaluate(wi, {ji[0], ji[1]}), 0, 1e-14);
  EXPECT_THROW(pullback_identity_omega({{0, 0, 1}, 0}), Error);
}

TEST(Pullback, OmegaSweep) {
  Rng g(35);
  for (int n = 0; n < 1000; ++n) {
    auto d = random_desing(g);
    auto [r1, r2] = pullback_identity_omega(d);
    double tol = 1e-10 * (1 + std::abs(d.lambda));
    EXPECT_LE(r1, tol);
    EXPECT_LE(r2, tol);
  }
}

TEST(WFields, RhoRelated) {
  auto [a, b] = w_fields_related({{1, 0, 0}, 1});
  EXPECT_LE(a, 1e-15);
  EXPECT_LE(b, 1e-15);
  auto [c, e] = w_fields_related({{0, 1, 0}, cx(2, 1)});
  EXPECT_LE(c, 1e-10);
  EXPECT_LE(e, 1e-10);
  EXPECT_THROW(w_fields_related({{0, 1, 0}, 0}), Error);
  Rng g(36);
  for (int n = 0; n < 500; ++n) {
    auto d = random_desing(g);
    auto [r1, r2] = w_fields_related(d);
    EXPECT_LE(r1, 1e-10);
    EXPECT_LE(r2, 1e-10);
    auto w = w_chart_field(1, d.lambda), w2 = w_chart_field(1, 2.0 * d.lambda);
    EXPECT_NEAR(w2[2], w[2] / 2, 1e-15 * (1 + std::fabs(w[2])));
    d.lambda *= 2;
    auto [s1, s2] = w_fields_related(d);
    EXPECT_LE(s1, 1e-10);
    EXPECT_LE(s2, 1e-10);
  }
}

TEST(Equivariance, RotationAndHopf) {
  Rng g(37);
  for (int n = 0; n < 500; ++n) {
    Mat2 u = random_su2(g);
    auto d = random_desing(g);
    EXPECT_LE(rho_equivariance_residual(u, d), 1e-12 * (1 + std::abs(d.lambda)));
    EXPECT_LE(hopf_rotation_residual(u), 1e-12);
  }
}

TEST(Charts, OrthonormalAndOriented) {
  Rng g(38);
  for (int n = 0; n < 500; ++n) {
    R3 w = random_unit3(g);
    auto c = s2_chart(w);
    EXPECT_NEAR(dot(c.u, c.u), 1, 1e-14);
    EXPECT_NEAR(dot(c.v, c.v), 1, 1e-14);
    EXPECT_NEAR(dot(c.u, w), 0, 1e-14);
    EXPECT_NEAR(dot(c.v, w), 0, 1e-14);
    EXPECT_NEAR(dot(w, cross(c.u, c.v)), 1, 1e-14);
  }
}
