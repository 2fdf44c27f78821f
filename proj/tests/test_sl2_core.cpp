#include <gtest/gtest.h>

#include "sl2pc/sampling.hpp"
#include "sl2pc/sl2_core.hpp"

using namespace sl2pc;

namespace {

const cx I(0, 1);

void expect_mat_near(const Mat2& a, const Mat2& b, double tol) {
  EXPECT_LE((a - b).max_abs(), tol);
}

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

TEST(CoordsToMatrix, Examples) {
  expect_mat_near(coords_to_matrix({1, 0, 0, 0, 0, 0}), {I, 0, 0, -I}, 0);
  expect_mat_near(coords_to_matrix({0, 0, 0, 0, 0, 0}), {}, 0);
  expect_mat_near(coords_to_matrix({0, 0, -0.5, 0, 0, -0.5}), {0, 1, 0, 0}, 0);
}

TEST(CoordsToMatrix, TracelessAndRoundTrip) {
  Rng g(11);
  for (int n = 0; n < 200; ++n) {
    Vec6 v = random_vec(g, 3);
    Mat2 m = coords_to_matrix(v);
    EXPECT_EQ(std::abs(m.trace()), 0.0);
    Vec6 back = matrix_to_coords(m);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(back[i], v[i], 1e-15 * (1 + std::fabs(v[i])));
  }
}

TEST(Invariants, Examples) {
  auto d = invariants(Sl2Point::from_matrix({I, 0, 0, -I}));
  EXPECT_DOUBLE_EQ(d.f.real(), 1);
  EXPECT_DOUBLE_EQ(d.f.imag(), 0);
  EXPECT_DOUBLE_EQ(d.R2, 2);
  auto n = invariants(Sl2Point::from_matrix({0, 1, 0, 0}));
  EXPECT_DOUBLE_EQ(std::abs(n.f), 0);
  EXPECT_DOUBLE_EQ(n.R2, 1);
}

TEST(Invariants, DeterminantEqualsCasimirAndFiberInequality) {
  Rng g(12);
  for (int n = 0; n < 1000; ++n) {
    auto p = random_point(g, 5);
    auto s = invariants(p);
    auto z = zs(p.coords());
    cx poly = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    EXPECT_LE(std::abs(p.matrix().det() - poly), ulp_tol(1 + s.R2));
    EXPECT_EQ(s.f1, s.f.real());
    EXPECT_EQ(s.f2, s.f.imag());
    EXPECT_LE(2 * s.absF, s.R2 + ulp_tol(s.R2));
  }
}

TEST(CharResiduals, Vanish) {
  for (Mat2 m : {Mat2{I, 0, 0, -I}, Mat2{0, 1, 0, 0}}) {
    auto [r1, r2] = char_residuals(Sl2Point::from_matrix(m));
    EXPECT_EQ(r1.max_abs(), 0);
    EXPECT_EQ(r2.max_abs(), 0);
  }
  Rng g(13);
  for (int n = 0; n < 100; ++n) {
    auto p = random_point(g, 4);
    double r2 = invariants(p).R2;
    auto [a, b] = char_residuals(p);
    EXPECT_LT(a.max_abs(), 1e-12 * (1 + r2 * r2));
    EXPECT_LT(b.max_abs(), 1e-12 * (1 + r2 * r2));
  }
}

TEST(SkeletonGap, Examples) {
  EXPECT_EQ(skeleton_gap(Sl2Point::from_matrix({I, 0, 0, -I})), 0);
  EXPECT_EQ(skeleton_gap(Sl2Point::from_matrix({0, 1, 0, 0})), 1);
}

TEST(SkeletonGap, EquivalentToNormality) {
  Rng g(14);
  int skel = 0;
  for (int n = 0; n < 10000; ++n) {
    Sl2Point p = (n % 2) ? skeleton_point(g) : random_point(g, 3);
    double r2 = invariants(p).R2;
    bool gap0 = skeleton_gap(p) <= 1e-10;
    bool comm0 = commutator_norm(p) <= 1e-9 * (1 + r2);
    EXPECT_EQ(gap0, comm0);
    skel += gap0;
  }
  EXPECT_GE(skel, 4900);
}

TEST(SkeletonGap, CommutatorNormIdentity) {
  // |[A,A*]|^2 = 2 (R^2 - 2|f|)(R^2 + 2|f|)
  Rng g(15);
  for (int n = 0; n < 500; ++n) {
    auto p = random_point(g, 3);
    auto s = invariants(p);
    double k = commutator_norm(p);
    EXPECT_NEAR(k * k, 2 * skeleton_gap(p) * (s.R2 + 2 * s.absF), 1e-12 * (1 + s.R2 * s.R2));
  }
}

TEST(Hopf, Examples) {
  auto h = hopf(Mat2::identity());
  EXPECT_EQ(h[0], 1);
  EXPECT_EQ(h[1], 0);
  EXPECT_EQ(h[2], 0);
  auto k = hopf({0, 1, -1, 0});
  EXPECT_EQ(k[0], -1);
  EXPECT_EQ(std::fabs(k[1]), 0);
  EXPECT_EQ(std::fabs(k[2]), 0);
}

TEST(Hopf, RejectsNonUnitary) {
  EXPECT_THROW(hopf({2, 0, 0, 0.5}), Error);
  EXPECT_THROW(hopf({I, 0, 0, I}), Error);  // det = -1
}

TEST(Hopf, SphereAndFiberInvariance) {
  Rng g(16);
  for (int n = 0; n < 500; ++n) {
    Mat2 u = random_su2(g);
    auto h = hopf(u);
    EXPECT_NEAR(h[0] * h[0] + h[1] * h[1] + h[2] * h[2], 1, 1e-12);
    double t = uniform(g, 0, 6.3);
    cx z = std::polar(1.0, t);
    auto h2 = hopf(u * Mat2{z, 0, 0, std::conj(z)});
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(h[i], h2[i], 1e-12);
  }
}
