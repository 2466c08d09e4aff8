#include "hvol/core.hpp"
#include "hvol/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using hvol::Ball;
using hvol::Matrix;
using hvol::Point;
using hvol::RngStream;
using hvol::Vector;

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

TEST(Contains, CubeCenterOutsideAndBoundary) {
  const auto P = hvol::cube(2);
  EXPECT_TRUE(hvol::contains(P, pt({0, 0})));
  EXPECT_FALSE(hvol::contains(P, pt({1.5, 0})));
  EXPECT_TRUE(hvol::contains(P, pt({1, 1})));
  EXPECT_TRUE(hvol::contains(P, pt({1 + 5e-10, 0})));
  EXPECT_FALSE(hvol::contains(P, pt({1 + 5e-9, 0})));
}

TEST(Contains, DimensionMismatchThrows) {
  EXPECT_THROW(hvol::contains(hvol::cube(2), pt({0, 0, 0})), hvol::Error);
  EXPECT_THROW(hvol::slack(hvol::cube(3), pt({0, 0})), hvol::Error);
}

TEST(Slack, Examples) {
  const auto P = hvol::cube(2);
  EXPECT_EQ(hvol::slack(P, pt({0, 0})), Vector::Ones(4));
  // cube rows: x1 <= 1, x2 <= 1, -x1 <= 1, -x2 <= 1
  EXPECT_DOUBLE_EQ(hvol::slack(P, pt({1, 0}))[0], 0.0);

  const auto S = hvol::simplex(2);  // -x1 <= 0, -x2 <= 0, x1 + x2 <= 1
  const Vector t = hvol::slack(S, pt({0.25, 0.25}));
  EXPECT_DOUBLE_EQ(t[0], 0.25);
  EXPECT_DOUBLE_EQ(t[1], 0.25);
  EXPECT_DOUBLE_EQ(t[2], 0.5);
}

TEST(Slack, AgreesWithContains) {
  RngStream rng(11);
  const auto P = hvol::cross(4);
  for (int i = 0; i < 2000; ++i) {
    Point p(4);
    for (int k = 0; k < 4; ++k) p[k] = 1.2 * (2.0 * rng.uniform() - 1.0);
    EXPECT_EQ(hvol::contains(P, p), hvol::slack(P, p).minCoeff() >= -1e-9);
  }
}

TEST(HPolytope, RejectsBadShapes) {
  EXPECT_THROW(hvol::HPolytope(Matrix::Ones(3, 2), Vector::Ones(2)), hvol::Error);
  Matrix A = Matrix::Identity(3, 2);
  EXPECT_THROW(hvol::HPolytope(A, Vector::Ones(3)), hvol::Error);  // third row is zero
  Matrix B = Matrix::Ones(2, 2);
  B(0, 0) = std::nan("");
  EXPECT_THROW(hvol::HPolytope(B, Vector::Ones(2)), hvol::Error);
}

TEST(Cholesky, Examples) {
  EXPECT_TRUE(hvol::cholesky(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));

  Matrix D = Vector(pt({4, 9})).asDiagonal();
  const Matrix LD = hvol::cholesky(D);
  EXPECT_DOUBLE_EQ(LD(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(LD(1, 1), 3.0);
  EXPECT_DOUBLE_EQ(LD(1, 0), 0.0);

  Matrix M(2, 2);
  M << 2, 1, 1, 2;
  const Matrix L = hvol::cholesky(M);
  EXPECT_NEAR(L(0, 0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(L(1, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(L(1, 1), std::sqrt(1.5), 1e-15);
  EXPECT_EQ(L(0, 1), 0.0);
  EXPECT_LE((L * L.transpose() - M).cwiseAbs().maxCoeff(), 1e-9 * M.cwiseAbs().maxCoeff());
}

TEST(Cholesky, NotPositiveDefinite) {
  Matrix M(2, 2);
  M << 1, 2, 2, 1;
  try {
    hvol::cholesky(M);
    FAIL() << "expected an error";
  } catch (const hvol::Error& e) {
    EXPECT_STREQ(e.what(), "not positive definite");
  }
}

TEST(Cholesky, RandomSpdReconstruction) {
  RngStream rng(2024);
  for (int d = 1; d <= 50; d += 7) {
    Matrix G(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
    const Matrix M = G * G.transpose() + d * Matrix::Identity(d, d);
    const Matrix L = hvol::cholesky(M);
    EXPECT_TRUE(L.isLowerTriangular());
    EXPECT_LE((L * L.transpose() - M).cwiseAbs().maxCoeff(), 1e-9 * M.cwiseAbs().maxCoeff()) << "d=" << d;
  }
}

TEST(BallVolume, ClosedForms) {
  EXPECT_NEAR(hvol::ball_volume(2, 1.0), std::numbers::pi, 1e-14);
  EXPECT_NEAR(hvol::ball_volume(3, 1.0), 4.0 * std::numbers::pi / 3.0, 1e-14);
  const double pi5 = std::pow(std::numbers::pi, 5);
  EXPECT_NEAR(hvol::ball_volume(10, 1.0), pi5 / 120.0, 1e-13);
  EXPECT_NEAR(hvol::ball_volume(10, 1.0), 2.55016, 1e-5);
}

TEST(BallVolume, Recurrence) {
  for (double r : {0.3, 1.0, 2.5}) {
    for (int d = 3; d <= 200; ++d) {
      const double lhs = hvol::ball_volume(d, r);
      const double rhs = hvol::ball_volume(d - 2, r) * 2.0 * std::numbers::pi * r * r / d;
      if (lhs == 0.0 || !std::isfinite(lhs)) continue;
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-12) << "d=" << d << " r=" << r;
    }
  }
}

TEST(BallVolume, LargeDimensionStaysFinite) {
  EXPECT_TRUE(std::isfinite(hvol::log_ball_volume(400, 1.0)));
  EXPECT_GT(hvol::ball_volume(196, 2.0), 0.0);
}

TEST(RandomPointInBall, Containment) {
  RngStream rng(3);
  const Ball B(pt({1, -2, 0.5}), 0.7);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LE((hvol::random_point_in_ball(B, rng) - B.center).norm(), B.radius * (1 + 1e-15));
  }
}

TEST(RandomPointInBall, InnerDiskFraction) {
  RngStream rng(5);
  const Ball B(Point::Zero(2), 1.0);
  const int n = 100000;
  int inside = 0;
  for (int i = 0; i < n; ++i) inside += hvol::random_point_in_ball(B, rng).norm() <= 0.5;
  EXPECT_NEAR(static_cast<double>(inside) / n, 0.25, 0.01);
}

TEST(RandomPointInBall, RadialCdf) {
  for (int d : {2, 3, 7}) {
    RngStream rng(100 + d);
    const Ball B(Point::Zero(d), 2.0);
    const int n = 100000;
    std::vector<double> radii(n);
    for (double& r : radii) r = hvol::random_point_in_ball(B, rng).norm() / B.radius;
    for (double q : {0.3, 0.6, 0.8, 0.95}) {
      const double p = std::pow(q, d);
      const double frac =
          static_cast<double>(std::count_if(radii.begin(), radii.end(), [&](double r) { return r <= q; })) / n;
      EXPECT_NEAR(frac, p, 3.0 * std::sqrt(p * (1 - p) / n) + 1e-12) << "d=" << d << " q=" << q;
    }
  }
}

TEST(RngStream, Determinism) {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
    EXPECT_EQ(a.uniform_int(17), b.uniform_int(17));
  }
  const Ball B(Point::Zero(4), 1.0);
  RngStream c(9), d(9);
  EXPECT_EQ(hvol::random_point_in_ball(B, c), hvol::random_point_in_ball(B, d));
}

TEST(RngStream, SubstreamsDiffer) {
  RngStream base(42);
  RngStream s0 = base.substream(0), s1 = base.substream(1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += s0.uniform() == s1.uniform();
  EXPECT_LT(equal, 3);
  RngStream again = base.substream(1);
  RngStream s1b(42, 1);
  EXPECT_EQ(again.uniform(), s1b.uniform());
}

TEST(RngStream, DrawRanges) {
  RngStream rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const int k = rng.uniform_int(5);
    EXPECT_GE(k, 0);
    EXPECT_LT(k, 5);
  }
}

}  // namespace
