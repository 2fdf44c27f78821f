#include <gtest/gtest.h>

#include "sl2pc/flow.hpp"

using namespace sl2pc;

namespace {

const cx I(0, 1);

double dist(const Sl2Point& a, const Sl2Point& b) { return (a.matrix() - b.matrix()).norm(); }

Sl2Point skeleton_point(Rng& g) {
  auto w = random_unit3(g);
  cx lam(gaussian(g), gaussian(g));
  Vec6 p;
  for (int j = 0; j < 3; ++j) {
    cx z = lam * w[j];
    p[2 * j] = z.real();
    p[2 * j + 1] = z.imag();
  }
  return Sl2Point(p);
}

}  // namespace

TEST(Theta, ValuesAtZeroAndOne) {
  for (int w = 1; w <= 3; ++w) EXPECT_DOUBLE_EQ(theta(w, 0, 0), 1);
  EXPECT_NEAR(theta(2, 0, 1), std::cosh(1.0), 1e-14);
  EXPECT_NEAR(theta(1, 0, 1), std::tanh(1.0), 1e-14);
  EXPECT_NEAR(theta(3, 0, 1), std::sinh(1.0), 1e-14);
}

TEST(Theta, SeriesAndJetAgreeAtSwitch) {
  for (int w = 1; w <= 3; ++w)
    for (int n = 0; n <= 6; ++n) {
      double lo = theta(w, n, 0.25 - 1e-12), hi = theta(w, n, 0.25 + 1e-12);
      EXPECT_NEAR(lo, hi, 1e-9 * (1 + std::fabs(lo))) << w << " " << n;
    }
}

TEST(Theta, DerivativesMatchFiniteDifferences) {
  for (int w = 1; w <= 3; ++w)
    for (double u : {0.1, 0.7, 3.0, 40.0})
      for (int n = 0; n < 4; ++n) {
        double h = 1e-5 * (1 + u);
        double fd = (theta(w, n, u + h) - theta(w, n, u - h)) / (2 * h);
        EXPECT_NEAR(theta(w, n + 1, u), fd, 1e-5 * (1 + std::fabs(fd))) << w << " " << n << " " << u;
      }
}

TEST(Theta, BoundsFinite) {
  auto xs = linear_grid(0, 50, 2001);
  for (int n = 0; n <= 4; ++n) {
    auto b = theta_bounds_check(n, xs);
    EXPECT_TRUE(std::isfinite(b.c1) && std::isfinite(b.c2) && std::isfinite(b.c3));
    auto b2 = theta_bounds_check(n, linear_grid(0, 50, 4001));
    EXPECT_LE(b2.c1, 1.05 * b.c1);
    EXPECT_LE(b2.c2, 1.05 * b.c2);
    EXPECT_LE(b2.c3, 1.05 * b.c3);
  }
  EXPECT_THROW(theta(1, 7, 1.0), Error);
}

TEST(WField, Examples) {
  EXPECT_EQ(w_field(Sl2Point::from_matrix({I, 0, 0, -I})).norm2, 0);
  auto w = w_field(Sl2Point::from_matrix({0, 1, 0, 0}));
  EXPECT_NEAR(w.norm2, 1.0 / 8, 1e-15);
  EXPECT_NEAR(w.expected, 1.0 / 8, 1e-15);
}

TEST(WField, NormAndTangency) {
  Rng g(21);
  for (int n = 0; n < 1000; ++n) {
    auto p = random_point(g, 3);
    auto w = w_field(p);
    auto s = invariants(p);
    EXPECT_NEAR(w.norm2, w.expected, 1e-10 * (1 + w.expected));
    double h = 1e-6;
    Vec6 x = p.coords(), y = p.coords();
    for (int i = 0; i < 6; ++i) {
      x[i] += h * w.coords[i];
      y[i] -= h * w.coords[i];
    }
    double df = std::abs(invariants(Sl2Point(x)).f - invariants(Sl2Point(y)).f) / 2;
    double r = std::sqrt(s.R2);
    EXPECT_LE(df / h, 1e-6 * (1 + r * r * r));
  }
}

TEST(Flow, SkeletonFixed) {
  Rng g(22);
  for (int n = 0; n < 50; ++n) {
    auto p = skeleton_point(g);
    for (double t : {0.0, 0.5, 7.0}) {
      EXPECT_LE(dist(flow_closed(p, t).A_t, p), 1e-12 * (1 + norm6(p.coords())));
      EXPECT_LE(dist(flow_rk4(p, t, 100), p), 1e-12 * (1 + norm6(p.coords())));
    }
  }
}

TEST(Flow, Nilpotent) {
  auto p = Sl2Point::from_matrix({0, 1, 0, 0});
  auto st = flow_closed(p, 1);
  EXPECT_NEAR(st.R2_t, 0.5, 1e-15);
  EXPECT_NEAR(invariants(st.A_t).R2, 0.5, 1e-14);
  EXPECT_NEAR(invariants(flow_rk4(p, 1, 1000)).R2, 0.5, 1e-12);
}

TEST(Flow, ClosedFormMatchesRk4) {
  Rng g(23);
  double worst = 0;
  for (int n = 0; n < 200; ++n) {
    auto p = random_point(g, 2);
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      Sl2Point a = flow_closed(p, t).A_t, b = flow_rk4(p, t, 10000);
      worst = std::max(worst, dist(a, b));
    }
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Flow, Rk4OrderFour) {
  Rng g(24);
  auto p = random_point(g, 2);
  Sl2Point ref = flow_closed(p, 3).A_t;
  double e1 = dist(flow_rk4(p, 3, 40), ref), e2 = dist(flow_rk4(p, 3, 80), ref);
  EXPECT_NEAR(e1 / e2, 16, 3);
  EXPECT_LE(dist(flow_rk4(p, 0, 5), p), 1e-15);
}

TEST(Flow, ScalarFlowsAndInvariants) {
  Rng g(25);
  for (int n = 0; n < 300; ++n) {
    auto p = random_point(g, 3);
    auto s = invariants(p);
    double prev = s.R2;
    for (double t : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0}) {
      auto st = flow_closed(p, t);
      auto si = invariants(st.A_t);
      EXPECT_LE(std::abs(si.f - s.f), 1e-10 * (1 + s.R2));
      EXPECT_NEAR(si.R2, st.R2_t, 1e-12 * (1 + s.R2));
      EXPECT_LE(st.R2_t, prev + 1e-14 * (1 + s.R2));
      prev = st.R2_t;
      Mat2 k = commutator(st.A_t.matrix(), st.A_t.matrix().adjoint());
      EXPECT_LE((k - st.K_t).norm(), 1e-12 * (1 + s.R2 * s.R2));
      EXPECT_NEAR(st.eps_t * st.varsigma_t(), 1, 1e-13);
      EXPECT_GT(st.eps_t, 0);
      EXPECT_LE(st.eps_t, 1);
    }
  }
}

TEST(Retract, Examples) {
  auto d = Sl2Point::from_matrix({I, 0, 0, -I});
  EXPECT_LE(dist(retract(d), d), 1e-15);
  EXPECT_EQ(norm6(retract(Sl2Point::from_matrix({0, 1, 0, 0})).coords()), 0);
}

TEST(Retract, Properties) {
  Rng g(26);
  for (int n = 0; n < 300; ++n) {
    auto p = random_point(g, 3);
    auto s = invariants(p);
    auto r = retract(p);
    auto sr = invariants(r);
    EXPECT_LE(skeleton_gap(r), 1e-9 * (1 + s.R2));
    EXPECT_LE(std::abs(sr.f - s.f), 1e-10 * (1 + s.R2));
    EXPECT_NEAR(sr.R2 / 2 * 2, 2 * s.absF, 1e-10 * (1 + s.R2));
    EXPECT_LE(dist(retract(r), r), 1e-10 * (1 + s.R2));
    Mat2 u = random_su2(g);
    EXPECT_LE(dist(retract(conjugate(u, p)), conjugate(u, r)), 1e-10 * (1 + s.R2));
  }
}

TEST(Retract, IsLimitOfFlow) {
  Rng g(27);
  int used = 0;
  while (used < 100) {
    auto p = random_point(g, 2);
    double af = invariants(p).absF;
    if (af < 0.1) continue;
    ++used;
    EXPECT_LE(dist(flow_closed(p, 10 / af).A_t, retract(p)), 1e-6);
  }
}

TEST(Mu, Examples) {
  Rng g(28);
  for (int n = 0; n < 50; ++n) {
    double t = uniform(g, 0, 10), R = uniform(g, 0, 5);
    EXPECT_NEAR(mu_eval(2, 2, t, R), t * R * R + std::sqrt(t) * R + 1, 1e-12 * (1 + t * R * R));
    EXPECT_NEAR(mu_eval(0, 3, t, R), R * R * R, 1e-12 * (1 + R * R * R));
  }
}

TEST(Mu, Submultiplicative) {
  auto ts = linear_grid(0, 1000, 401), rs = linear_grid(0, 10, 101);
  double c = mu_submult_constant(2, 2, 2, 2, ts, rs);
  EXPECT_TRUE(std::isfinite(c));
  double c2 = mu_submult_constant(2, 2, 2, 2, linear_grid(0, 1000, 801), linear_grid(0, 10, 201));
  EXPECT_LE(c2, 1.05 * c);
}

TEST(EpsBound, Examples) {
  // t = 0: ratio exactly 1
  EXPECT_DOUBLE_EQ(eps_bound_check(1, eps_grid(0, 2, 1, 10, 3)), 1);
  auto g = eps_grid(100, 2, 201, 20, 11);
  double c1 = eps_bound_check(1, g), c2 = eps_bound_check(2, g);
  EXPECT_TRUE(std::isfinite(c1));
  EXPECT_TRUE(std::isfinite(c2));
  EXPECT_GE(c1, 1);
  EXPECT_THROW(eps_bound_check(0.5, g), std::invalid_argument);
}

TEST(EpsBound, SkeletonPoints) {
  std::vector<EpsSample> g;
  for (double t : linear_grid(0, 50, 101))
    for (double R : linear_grid(0.05, 3, 30)) g.push_back({t, point_with(R * R, R * R / 2)});
  double c = eps_bound_check(1, g);
  EXPECT_TRUE(std::isfinite(c));
  EXPECT_LE(c, 2);
}

TEST(EpsBound, StableUnderRefinement) {
  for (double q : {1.0, 2.0}) {
    double a = eps_bound_check(q, eps_grid(100, 2, 101, 20, 5));
    double b = eps_bound_check(q, eps_grid(100, 2, 201, 40, 9));
    EXPECT_LE(b, 1.05 * a) << q;
  }
}

TEST(FlowGrowth, DerivativeSweepStable) {
  auto coarse = derivative_growth_sweep(growth_grid(1e-4, 20, 1e-3, 2, 7, 7, 3));
  auto fine = derivative_growth_sweep(growth_grid(1e-4, 20, 1e-3, 2, 13, 13, 5));
  for (int n = 0; n < 3; ++n) {
    EXPECT_TRUE(std::isfinite(coarse.c[n]));
    EXPECT_LE(fine.c[n], 1.05 * coarse.c[n]) << n;
  }
}
