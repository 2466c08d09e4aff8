#include "hvol/generators.hpp"
#include "hvol/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using hvol::Ball;
using hvol::Chord;
using hvol::HPolytope;
using hvol::Point;
using hvol::RngStream;
using hvol::Vector;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Rejection sampling from the bounding box.
Point interior_point(const HPolytope& P, const hvol::BoundingBox& box, RngStream& rng) {
  for (;;) {
    Point p(P.dimension());
    for (int k = 0; k < P.dimension(); ++k)
      p[k] = box.lower[k] + rng.uniform() * (box.upper[k] - box.lower[k]);
    if (hvol::slack(P, p).minCoeff() > 0.0) return p;
  }
}

TEST(ChordFacets, CubeExamples) {
  const auto P = hvol::cube(2);
  Chord c = hvol::chord_facets(P, vec({0, 0}), vec({1, 0}));
  EXPECT_DOUBLE_EQ(c.lambda_minus, -1.0);
  EXPECT_DOUBLE_EQ(c.lambda_plus, 1.0);
  c = hvol::chord_facets(P, vec({0.5, 0}), vec({1, 0}));
  EXPECT_DOUBLE_EQ(c.lambda_minus, -1.5);
  EXPECT_DOUBLE_EQ(c.lambda_plus, 0.5);
}

TEST(ChordFacets, TriangleDiagonal) {
  const double s = 1.0 / std::sqrt(2.0);
  const Chord c = hvol::chord_facets(hvol::simplex(2), vec({0.25, 0.25}), vec({s, s}));
  EXPECT_NEAR(c.lambda_plus, 0.25 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c.lambda_minus, -0.25 * std::sqrt(2.0), 1e-15);
}

TEST(ChordFacets, UnboundedDirection) {
  const HPolytope wedge(-hvol::Matrix::Identity(2, 2), Vector::Zero(2));
  try {
    hvol::chord_facets(wedge, vec({1, 1}), vec({1, 0}));
    FAIL();
  } catch (const hvol::Error& e) {
    EXPECT_STREQ(e.what(), "unbounded direction");
  }
}

TEST(ChordFacets, EndpointsLieOnTheBoundary) {
  RngStream rng(21);
  const auto P = hvol::random_tangent(6, 30, rng);
  const auto box = *hvol::bounding_box(P);
  for (int trial = 0; trial < 500; ++trial) {
    const Point p0 = interior_point(P, box, rng);
    const Vector v = hvol::random_direction(6, rng);
    const Chord c = hvol::chord_facets(P, p0, v);
    EXPECT_LE(c.lambda_minus, 0.0);
    EXPECT_GE(c.lambda_plus, 0.0);
    for (double lambda : {c.lambda_minus, c.lambda_plus}) {
      const Vector t = hvol::slack(P, p0 + lambda * v);
      EXPECT_GE(t.minCoeff(), -1e-7);
      EXPECT_LE(t.cwiseAbs().minCoeff(), 1e-7);
    }
  }
}

TEST(CdhrInit, Examples) {
  auto [c, state] = hvol::chord_cdhr_init(hvol::cube(2), vec({0, 0}), 0);
  EXPECT_DOUBLE_EQ(c.lambda_minus, -1.0);
  EXPECT_DOUBLE_EQ(c.lambda_plus, 1.0);
  EXPECT_EQ(state.last_coord, 0);
  EXPECT_EQ(state.t, Vector::Ones(4));

  auto [c2, s2] = hvol::chord_cdhr_init(hvol::simplex(2), vec({0.25, 0.25}), 1);
  EXPECT_DOUBLE_EQ(c2.lambda_minus, -0.25);
  EXPECT_DOUBLE_EQ(c2.lambda_plus, 0.5);
}

TEST(CdhrInit, MatchesFacetScan) {
  RngStream rng(99);
  const auto P = hvol::random_tangent(6, 30, rng);
  const auto box = *hvol::bounding_box(P);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point p0 = interior_point(P, box, rng);
    const int k = rng.uniform_int(6);
    const Chord a = hvol::chord_cdhr_init(P, p0, k).first;
    const Chord b = hvol::chord_facets(P, p0, Vector::Unit(6, k));
    EXPECT_EQ(a.lambda_minus, b.lambda_minus);
    EXPECT_EQ(a.lambda_plus, b.lambda_plus);
  }
}

TEST(CdhrStep, CubeExamples) {
  const auto P = hvol::cube(2);
  {
    auto state = hvol::chord_cdhr_init(P, vec({0, 0}), 0).second;
    const Chord c = hvol::chord_cdhr_step(P, state, 0.5, 1);
    EXPECT_DOUBLE_EQ(c.lambda_minus, -1.0);
    EXPECT_DOUBLE_EQ(c.lambda_plus, 1.0);
    EXPECT_EQ(state.last_coord, 1);
    EXPECT_DOUBLE_EQ(state.p[0], 0.5);
  }
  {
    auto state = hvol::chord_cdhr_init(P, vec({0, 0}), 0).second;
    const Chord c = hvol::chord_cdhr_step(P, state, 0.5, 0);
    EXPECT_DOUBLE_EQ(c.lambda_minus, -1.5);
    EXPECT_DOUBLE_EQ(c.lambda_plus, 0.5);
  }
}

TEST(CdhrStep, DriftOutsideThrows) {
  const auto P = hvol::cube(2);
  auto state = hvol::chord_cdhr_init(P, vec({0.9, 0}), 0).second;
  try {
    hvol::chord_cdhr_step(P, state, 0.5, 1);
    FAIL();
  } catch (const hvol::Error& e) {
    EXPECT_STREQ(e.what(), "state drift");
  }
}

// Chained amortized steps against fresh chords at every visited point.
void check_chain(const HPolytope& P, RngStream& rng, int steps, double tol) {
  const int d = P.dimension();
  const auto ball = hvol::chebyshev_ball(P);
  int k = rng.uniform_int(d);
  auto [chord, state] = hvol::chord_cdhr_init(P, ball.center, k);
  double worst = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double c = chord.lambda_minus + rng.uniform() * chord.length();
    k = rng.uniform_int(d);
    chord = hvol::chord_cdhr_step(P, state, c, k);
    const Chord fresh = hvol::chord_cdhr_init(P, state.p, k).first;
    worst = std::max({worst, std::abs(chord.lambda_minus - fresh.lambda_minus),
                      std::abs(chord.lambda_plus - fresh.lambda_plus)});
  }
  EXPECT_LE(worst, tol);
}

TEST(CdhrStep, AmortizedEqualsFreshOnRandomTangent) {
  RngStream rng(8);
  check_chain(hvol::random_tangent(8, 40, rng), rng, 10000, 1e-8);
}

TEST(CdhrStep, AmortizedEqualsFreshOnGenerators) {
  RngStream rng(10);
  check_chain(hvol::cube(20), rng, 10000, 1e-8);
  check_chain(hvol::simplex(15), rng, 10000, 1e-8);
  check_chain(hvol::cross(8), rng, 10000, 1e-8);
  check_chain(hvol::simplex_product(6), rng, 10000, 1e-8);
  check_chain(hvol::skinny_cube(10), rng, 10000, 1e-8);
  check_chain(hvol::birkhoff(4), rng, 10000, 1e-8);
}

TEST(ClipWithBall, Examples) {
  const Chord cube_chord{-1.0, 1.0};
  const Vector v = vec({1, 0});
  Chord c = hvol::clip_with_ball(cube_chord, vec({0, 0}), v, Ball(vec({0, 0}), 0.5));
  EXPECT_DOUBLE_EQ(c.lambda_minus, -0.5);
  EXPECT_DOUBLE_EQ(c.lambda_plus, 0.5);

  c = hvol::clip_with_ball(cube_chord, vec({0, 0}), v, Ball(vec({0, 0}), 10.0));
  EXPECT_DOUBLE_EQ(c.lambda_minus, -1.0);
  EXPECT_DOUBLE_EQ(c.lambda_plus, 1.0);

  // From (0.3, 0) the unit circle is hit at lambda = 0.7 and -1.3; the cube
  // chord from there is (-1.3, 0.7) as well.
  const Chord ball_only = hvol::ball_chord(Ball(vec({0, 0}), 1.0), vec({0.3, 0}), v);
  EXPECT_NEAR(ball_only.lambda_plus, 0.7, 1e-15);
  EXPECT_NEAR(ball_only.lambda_minus, -1.3, 1e-15);
  c = hvol::clip_with_ball(hvol::chord_facets(hvol::cube(2), vec({0.3, 0}), v), vec({0.3, 0}), v,
                           Ball(vec({0, 0}), 1.0));
  EXPECT_NEAR(c.lambda_minus, -1.3, 1e-15);
  EXPECT_NEAR(c.lambda_plus, 0.7, 1e-15);
}

TEST(ClipWithBall, OutputInsideBothChords) {
  RngStream rng(44);
  const auto P = hvol::cube(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const Ball B(hvol::random_point_in_ball(Ball(Point::Zero(5), 0.3), rng), 0.4 + rng.uniform());
    Point p0 = hvol::random_point_in_ball(B, rng);
    if (!hvol::contains(P, p0)) continue;
    const Vector v = hvol::random_direction(5, rng);
    const Chord poly = hvol::chord_facets(P, p0, v);
    const Chord ball = hvol::ball_chord(B, p0, v);
    const Chord out = hvol::clip_with_ball(poly, p0, v, B);
    EXPECT_GE(out.lambda_minus, poly.lambda_minus);
    EXPECT_GE(out.lambda_minus, ball.lambda_minus);
    EXPECT_LE(out.lambda_plus, poly.lambda_plus);
    EXPECT_LE(out.lambda_plus, ball.lambda_plus);
    EXPECT_LE((p0 + out.lambda_plus * v - B.center).norm(), B.radius + 1e-9);
    EXPECT_LE((p0 + out.lambda_minus * v - B.center).norm(), B.radius + 1e-9);
  }
}

TEST(ClipWithBall, AxisFormMatchesGeneral) {
  RngStream rng(45);
  const Ball B(vec({0.1, -0.2, 0.3}), 0.9);
  for (int trial = 0; trial < 500; ++trial) {
    const Point p0 = hvol::random_point_in_ball(B, rng);
    const int k = rng.uniform_int(3);
    const Chord wide{-5.0, 5.0};
    const Chord a = hvol::clip_with_ball(wide, p0, Vector::Unit(3, k), B);
    const Chord b = hvol::clip_axis_with_ball(wide, p0[k] - B.center[k], (p0 - B.center).squaredNorm(), B);
    EXPECT_NEAR(a.lambda_minus, b.lambda_minus, 1e-12);
    EXPECT_NEAR(a.lambda_plus, b.lambda_plus, 1e-12);
  }
}

TEST(ChordMembership, CubePredicate) {
  const auto P = hvol::cube(2);
  auto body = [&](const Point& x) { return hvol::contains(P, x); };
  const Ball bound(Point::Zero(2), 3.0);
  const auto res = hvol::chord_membership(body, bound, vec({0, 0}), vec({1, 0}), 1e-6);
  EXPECT_GE(res.chord.lambda_plus, 1.0 - 1e-6);
  EXPECT_LE(res.chord.lambda_plus, 1.0 + 1e-9);
  EXPECT_LE(res.chord.lambda_minus, -1.0 + 1e-6);
  EXPECT_GE(res.chord.lambda_minus, -1.0 - 1e-9);
  const int bound_iters = static_cast<int>(std::ceil(std::log2(2.0 * bound.radius / 1e-6)));
  EXPECT_LE(res.iterations, 2 * bound_iters);
}

TEST(ChordMembership, StartOutsideThrows) {
  const auto P = hvol::cube(2);
  auto body = [&](const Point& x) { return hvol::contains(P, x); };
  EXPECT_THROW(hvol::chord_membership(body, Ball(Point::Zero(2), 3.0), vec({2, 0}), vec({1, 0}), 1e-6),
               hvol::Error);
}

TEST(ChordMembership, AgreesWithFacets) {
  RngStream rng(66);
  const auto P = hvol::random_tangent(6, 30, rng);
  const auto box = *hvol::bounding_box(P);
  const Ball bound(0.5 * (box.lower + box.upper), 0.5 * (box.upper - box.lower).norm() + 1.0);
  auto body = [&](const Point& x) { return hvol::contains(P, x); };
  const double eps = 1e-6;
  const int per_endpoint = static_cast<int>(std::ceil(std::log2(2.0 * bound.radius / eps)));
  for (int trial = 0; trial < 100; ++trial) {
    const Point p0 = interior_point(P, box, rng);
    const Vector v = hvol::random_direction(6, rng);
    const Chord ref = hvol::chord_facets(P, p0, v);
    const auto opaque = hvol::chord_membership(body, bound, p0, v, eps);
    const auto cached = hvol::chord_membership(P, bound, p0, v, eps);
    for (const auto* res : {&opaque, &cached}) {
      EXPECT_LE(std::abs(res->chord.lambda_plus - ref.lambda_plus), eps);
      EXPECT_LE(std::abs(res->chord.lambda_minus - ref.lambda_minus), eps);
      EXPECT_LE(res->iterations, 2 * per_endpoint);
      EXPECT_TRUE(hvol::contains(P, p0 + res->chord.lambda_plus * v));
      EXPECT_TRUE(hvol::contains(P, p0 + res->chord.lambda_minus * v));
    }
  }
}

}  // namespace
