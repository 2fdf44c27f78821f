#include <gtest/gtest.h>

#include "sl2pc/homotopy.hpp"
#include "sl2pc/sampling.hpp"

using namespace sl2pc;

namespace {

const QuadratureSpec kQuad{1e-10, 1e-10, 400};

const std::vector<NamedFlatForm>& family() {
  static const auto f = load_flat_family();
  return f;
}

Sl2Point off_cone(Rng& g, double min_f = 0.2, double rmax = 2) {
  Sl2Point p;
  do p = random_point(g, rmax);
  while (invariants(p).absF < min_f);
  return p;
}

Sl2Point skeleton_point(Rng& g) { return rho({random_unit3(g), cx(gaussian(g), gaussian(g))}); }

NumericForm df1() { return numeric(differential(f1_poly())); }

// exp(-1/R^2) dx1
FlatForm flat_dx1() {
  FlatForm f;
  f.deg = 1;
  f.add(1, Flat6(1, Poly6(1), 0));
  return f;
}

// g(f) phi with g(w) = exp(-1/|w|^2), a Casimir multiple of phi
NumericForm casimir_phi() {
  GradedField phi = phi_form();
  return numeric(2, [phi](const Vec6& x) {
    double af = abs_f(x);
    Alt a = evaluate(phi, x);
    a *= af == 0 ? 0 : std::exp(-1 / (af * af));
    return a;
  });
}

std::vector<Vec6> random_vectors(Rng& g, int k) {
  std::vector<Vec6> v;
  for (int i = 0; i < k; ++i) v.push_back(random_vec(g));
  return v;
}

}  // namespace

TEST(FlatFamily, LoadsFiveTwoForms) {
  ASSERT_EQ(family().size(), 5u);
  for (auto& f : family()) EXPECT_EQ(f.form.deg, 2);
  EXPECT_THROW(load_flat_family("/nonexistent.json"), Error);
}

TEST(FlatFamily, ExactDerivativeMatchesDifferences) {
  Rng g(40);
  for (auto& nf : family()) {
    NumericForm a = numeric(nf.form);
    NumericForm da = ext_deriv(a);
    ASSERT_TRUE(da.flat);
    for (int n = 0; n < 10; ++n) {
      Vec6 x = random_point(g, 2).coords();
      Alt fd = numeric_ext_deriv(a.fn, x, 2, fd_step(x, 1e-3));
      EXPECT_LE((fd - da(x)).max_abs(), 1e-9) << nf.name;
      EXPECT_LE(ext_deriv(da)(x).max_abs(), 1e-9) << nf.name;
    }
  }
}

TEST(NumericForm, Alternating) {
  Rng g(41);
  for (auto& nf : family()) {
    NumericForm a = numeric(nf.form);
    Vec6 x = random_point(g, 2).coords();
    auto v = random_vectors(g, 2);
    double s = a(x, {v[0], v[1]}), t = a(x, {v[1], v[0]});
    EXPECT_NEAR(s, -t, 1e-10 * (1 + std::fabs(s)));
  }
}

TEST(NumericForm, BudgetAndStencil) {
  NumericForm a = numeric(1, [](const Vec6& x) { return Alt::vector(Variance::form, x); }, Locus::origin, 1);
  NumericForm da = ext_deriv(a);
  EXPECT_THROW(ext_deriv(da), Error);
  EXPECT_THROW(da(Vec6{1e-6, 0, 0, 0, 0, 0}), Error);
  // d(sum x_i dx_i) = 0
  EXPECT_LE(da(Vec6{1, 2, 0, 1, 0, 0}).max_abs(), 1e-9);
}

TEST(Pullback, FlowAtZeroIsIdentity) {
  Rng g(42);
  NumericForm a = numeric(family()[1].form);
  Vec6 x = random_point(g, 2).coords();
  EXPECT_EQ((pullback_form(PullMap::flow(0), a, x) - a(x)).max_abs(), 0);
}

TEST(Pullback, CasimirDifferentialInvariant) {
  Rng g(43);
  for (int n = 0; n < 50; ++n) {
    Vec6 x = off_cone(g).coords();
    auto v = random_vectors(g, 1);
    double ref = df1()(x, v);
    EXPECT_NEAR(pullback_eval(PullMap::retraction(), df1(), x, v), ref, 1e-8 * (1 + std::fabs(ref)));
    EXPECT_NEAR(pullback_eval(PullMap::flow(uniform(g, 0, 5)), df1(), x, v), ref, 1e-8 * (1 + std::fabs(ref)));
  }
}

TEST(Pullback, RhoPullsPhiBack) {
  NumericForm phi = numeric(phi_form());
  DesingPoint d{{1, 0, 0}, 1};
  EXPECT_NEAR(pullback_rho(phi, d, {{0, 0, 1, 0}, {0, 0, 0, 1}}), 4, 1e-13);
}

TEST(HtOp, TrivialCases) {
  Rng g(44);
  NumericForm a = numeric(family()[0].form);
  Vec6 x = random_point(g, 2).coords();
  EXPECT_EQ(h_t_op(a, x, 0, kQuad).value.max_abs(), 0);
  Vec6 s = skeleton_point(g).coords();
  EXPECT_LE(h_t_op(a, s, 3, kQuad).value.max_abs(), 1e-12);
  EXPECT_THROW(h_t_op(a, x, -1, kQuad), std::invalid_argument);
}

TEST(HtOp, PreservesPhiFactor) {
  Rng g(45);
  NumericForm a = numeric(wedge(phi_form(), flat_dx1()));
  ASSERT_EQ(a.deg, 3);
  for (int n = 0; n < 10; ++n) {
    Vec6 x = random_point(g, 2).coords();
    Alt h = h_t_op(a, x, 1.5, kQuad).value;
    Vec6 grad;
    for (int i = 0; i < 6; ++i) grad[i] = f1_poly().diff(i).eval<double>(x);
    Vec6 tangent = matvec(sharp_matrix(evaluate(pi1(), x)), grad);
    double scale = h.max_abs() * norm6(tangent);
    EXPECT_LE(std::fabs(evaluate(h, {tangent, random_vec(g)})), 1e-8 * (1 + scale));
  }
}

TEST(HomotopyT, ClosedAndTrivialInputs) {
  Rng g(46);
  for (int n = 0; n < 5; ++n) {
    Vec6 x = random_point(g, 2).coords();
    EXPECT_LE(homotopy_residual_t(df1(), x, 1.0, kQuad).value, 1e-8);
    EXPECT_EQ(homotopy_residual_t(numeric(family()[2].form), x, 0, kQuad).value, 0);
  }
}

TEST(HomotopyT, FlatOneForm) {
  Rng g(47);
  NumericForm a = numeric(flat_dx1());
  for (int n = 0; n < 5; ++n) {
    Vec6 x = random_point(g, 2).coords();
    auto r = homotopy_residual_t(a, x, 1.0, kQuad);
    EXPECT_LE(r.value, r.tol);
  }
}

TEST(HomotopyT, FamilySweep) {
  Rng g(48);
  for (auto& nf : family()) {
    NumericForm a = numeric(nf.form);
    for (int n = 0; n < 4; ++n) {
      Vec6 x = random_point(g, 2.5).coords();
      double t = uniform(g, 0.1, 6);
      auto r = homotopy_residual_t(a, x, t, kQuad);
      EXPECT_LE(r.value, r.tol) << nf.name << " t=" << t;
    }
  }
}

TEST(HSkeleton, RequiresFlatInput) {
  Rng g(49);
  EXPECT_THROW(h_skeleton(df1(), off_cone(g).coords(), 1e-6), Error);
}

TEST(HSkeleton, SkeletonPointGivesZero) {
  Rng g(50);
  Vec6 s = skeleton_point(g).coords();
  EXPECT_EQ(h_skeleton(numeric(family()[0].form), s, 1e-7).max_abs(), 0);
}

TEST(HSkeleton, TruncationConvergesAndMatchesFiniteT) {
  Rng g(51);
  const double tol = 1e-7;
  for (auto& nf : family()) {
    NumericForm a = numeric(nf.form);
    // a point with |f| = 1
    Vec6 x = point_with(uniform(g, 2.2, 4), 1).coords();
    x = conjugate(random_su2(g), Sl2Point(x)).coords();
    auto rule = h_skeleton_rule(a, x, tol);
    EXPECT_EQ(rule.branch, 1);
    EXPECT_LE(rule.tail, tol / 2);
    Alt far = h_t_op(a, x, 2 * rule.T, QuadratureSpec{tol / 4, 1e-12, 2000}).value;
    EXPECT_LE((far - rule.quad.value).max_abs(), 2 * tol) << nf.name;
    // exchange of limits: the finite-t value at T is within the tail bound
    Alt at_t = h_t_op(a, x, rule.T, QuadratureSpec{tol / 4, 1e-12, 2000}).value;
    EXPECT_LE((far - at_t).max_abs(), rule.tail + tol) << nf.name;
  }
}

TEST(HSkeleton, PowerBranchNearCone) {
  Rng g(52);
  NumericForm a = numeric(family()[0].form);
  Vec6 x = point_with(1.0, 0.01).coords();
  auto rule = h_skeleton_rule(a, x, 1e-5);
  EXPECT_EQ(rule.branch, 2);
  EXPECT_LE(rule.tail, 0.5e-5);
  EXPECT_TRUE(std::isfinite(rule.quad.value.max_abs()));
}

TEST(HSkeleton, HomotopyAtInfinity) {
  Rng g(53);
  const double tol = 1e-7;
  for (auto& nf : family()) {
    NumericForm a = numeric(nf.form);
    for (int n = 0; n < 3; ++n) {
      Vec6 x = off_cone(g).coords();
      EXPECT_LE(skeleton_residual_alt(a, x, tol).max_abs(), 5 * tol) << nf.name;
    }
  }
}

TEST(PSkeleton, FixesCasimirTimesPhi) {
  Rng g(54);
  NumericForm a = casimir_phi();
  for (int n = 0; n < 20; ++n) {
    Vec6 x = off_cone(g).coords();
    EXPECT_LE((p_skeleton(a, x) - a(x)).max_abs(), 1e-8);
  }
}

TEST(PSkeleton, IdentityOnSkeletonAndIdempotent) {
  Rng g(55);
  NumericForm a = numeric(family()[4].form);
  NumericForm pa = p_skeleton_form(a);
  // on the skeleton p_S a agrees with a along the skeleton's tangent spaces
  for (int n = 0; n < 10; ++n) {
    DesingPoint d{random_unit3(g), cx(uniform(g, 0.5, 1.5), gaussian(g))};
    Vec6 s = rho(d).coords();
    Jac64 j = rho_jacobian(d);
    Alt ps = p_skeleton(a, s), as = a(s);
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q)
        EXPECT_NEAR(evaluate(ps, {j[p], j[q]}), evaluate(as, {j[p], j[q]}), 1e-8);
  }
  for (int n = 0; n < 10; ++n) {
    Vec6 x = off_cone(g).coords();
    EXPECT_LE((p_skeleton(pa, x) - pa(x)).max_abs(), 1e-7);
  }
  EXPECT_THROW(p_skeleton(a, point_with(1, 0).coords()), Error);
}

TEST(PSkeleton, CommutesWithPhi) {
  Rng g(56);
  GradedField phi = phi_form();
  NumericForm b = numeric(flat_dx1());
  NumericForm pb = numeric(wedge(phi, flat_dx1()));
  for (int n = 0; n < 10; ++n) {
    Vec6 x = off_cone(g).coords();
    Alt lhs = p_skeleton(pb, x);
    Alt rhs = wedge(evaluate(phi, x), p_skeleton(b, x));
    EXPECT_LE((lhs - rhs).max_abs(), 1e-7 * (1 + rhs.max_abs()));
  }
}

TEST(PSu2, InvariantAndNonInvariantInputs) {
  Rng g(57);
  S3Rule s8 = s3_rule(8), s12 = s3_rule(12);
  NumericForm dx1 = numeric(GradedField::basis(Variance::form, 1));
  for (int n = 0; n < 10; ++n) {
    Vec6 x = random_point(g, 2).coords();
    EXPECT_LE((p_su2(df1(), x, s8) - df1()(x)).max_abs(), 1e-12);
    EXPECT_LE((p_su2(df1(), x, s8) - p_su2(df1(), x, s12)).max_abs(), 1e-10);
    EXPECT_LE(p_su2(dx1, x, s8).max_abs(), 1e-12);
  }
}

TEST(PSu2, HaarNormalizationAndCrossCheck) {
  BallRule b = haar_ball_rule(16);
  EXPECT_NEAR(b.N, haar_normalization_exact(), 1e-12);
  S3Rule s = s3_rule(12);
  Rng g(58);
  for (int n = 0; n < 10; ++n) {
    NumericForm a = numeric(family()[n % 5].form);
    Vec6 x = random_point(g, 2).coords();
    EXPECT_LE((p_su2(a, x, s) - p_su2_exp(a, x, b)).max_abs(), 1e-6);
  }
}

TEST(PSu2, ResultIsInvariant) {
  Rng g(59);
  S3Rule s = s3_rule(12);
  NumericForm a = numeric(family()[1].form);
  NumericForm pa = numeric(2, [&](const Vec6& x) { return p_su2(a, x, s); });
  for (int n = 0; n < 3; ++n) {
    Vec6 x = random_point(g, 2).coords();
    Mat2 u = random_su2(g);
    EXPECT_LE((ad_pullback(u, pa, x) - pa(x)).max_abs(), 1e-7);
  }
}

TEST(HSu2, HomotopyIdentity) {
  Rng g(60);
  S3Rule s = s3_rule(8);
  BallRule b = haar_ball_rule(12);
  NumericForm dx1 = numeric(GradedField::basis(Variance::form, 1));
  NumericForm phi = numeric(phi_form());
  for (int n = 0; n < 2; ++n) {
    Vec6 x = random_point(g, 2).coords();
    EXPECT_LE(su2_residual_alt(df1(), x, s, b).max_abs(), 1e-6);
    EXPECT_LE(su2_residual_alt(phi, x, s, b).max_abs(), 1e-6);
    EXPECT_LE(su2_residual_alt(dx1, x, s, b).max_abs(), 1e-4);
    EXPECT_LE(su2_residual_alt(numeric(family()[n].form), x, s, b).max_abs(), 1e-4);
  }
}

TEST(PSu2, CommutesWithPSkeleton) {
  Rng g(61);
  S3Rule s = s3_rule(8);
  NumericForm a = numeric(family()[2].form);
  NumericForm ps = p_skeleton_form(a);
  NumericForm pu = numeric(2, [&](const Vec6& x) { return p_su2(a, x, s); });
  for (int n = 0; n < 3; ++n) {
    Vec6 x = off_cone(g).coords();
    Alt lhs = p_su2(ps, x, s), rhs = p_skeleton(pu, x);
    EXPECT_LE((lhs - rhs).max_abs(), 1e-6 * (1 + rhs.max_abs()));
  }
}

TEST(Delta, Examples) {
  Rng g(62);
  Vec6 x = off_cone(g).coords();
  Alt eta = evaluate(phi_form(), x);
  Alt g1 = gamma_field(1).eval(x), g2 = gamma_field(2).eval(x);
  auto r = delta_op(eta, R2Tag::e12, x);
  EXPECT_FALSE(r.set[0]);
  EXPECT_LE((r.part[2] - wedge(g1, eta)).max_abs(), 0);
  EXPECT_LE((r.part[1] + wedge(g2, eta)).max_abs(), 0);
  Alt one = Alt::vector(Variance::form, random_vec(g));
  auto s = delta_op(one, R2Tag::e1, x);
  EXPECT_LE((s.part[0] + wedge(g1, one)).max_abs(), 0);
  EXPECT_EQ(delta_op(eta, R2Tag::one, x).max_abs(), 0);
  EXPECT_THROW(delta_op(eta, R2Tag::e1, point_with(2, 0).coords()), Error);
}

TEST(Delta, SquaresToZero) {
  Rng g(63);
  for (int n = 0; n < 50; ++n) {
    Vec6 x = off_cone(g, 0.05).coords();
    TaggedForm t;
    Alt eta(Variance::form, 0);
    eta.c[0] = gaussian(g);
    t.add(R2Tag::e12, eta);
    auto dd = delta_op(delta_op(t, x), x);
    double scale = gamma_field(1).eval(x).max_abs() * gamma_field(2).eval(x).max_abs();
    EXPECT_LE(dd.max_abs(), 1e-12 * (1 + scale));
  }
}
