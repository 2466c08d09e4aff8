#pragma once

// Boundary oracles: the chord {p0 + lambda v} ∩ body, as the parameter
// interval [lambda_minus, lambda_plus] around an interior point p0.

#include "hvol/core.hpp"

#include <cassert>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace hvol {

/// Rows with |A_i v| at or below this are treated as parallel to the line.
inline constexpr double kParallelTol = 1e-12;

struct Chord {
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;

  double length() const { return lambda_plus - lambda_minus; }
};

/// Cached state of a coordinate-direction walk: the point, its slack vector
/// t = b - A p and its squared distance to the current ball center.
struct WalkState {
  Point p;
  Vector t;
  std::optional<int> last_coord;
  double ball_norm_sq = 0.0;
  int steps_since_refresh = 0;
};

namespace detail {

/// lambda_plus = min over a_i > 0 of t_i / a_i, lambda_minus = max over
/// a_i < 0. `dots` holds the A_i v values.
template <typename Slack, typename Dots>
Chord chord_from_slack(const Slack& t, const Dots& dots) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double a = dots[i];
    if (a > kParallelTol) {
      hi = std::min(hi, t[i] / a);
    } else if (a < -kParallelTol) {
      lo = std::max(lo, t[i] / a);
    }
  }
  if (!std::isfinite(hi) || !std::isfinite(lo)) fail_input("unbounded direction");
  // Slacks down to -kInsideTol are admitted as inside; clamp so p0 stays on
  // the chord.
  return Chord{std::min(lo, 0.0), std::max(hi, 0.0)};
}

}  // namespace detail

/// Full facet scan, Theta(m d).
inline Chord chord_facets(const HPolytope& P, const Point& p0, const Vector& v) {
  check_dimension(P, p0);
  const Vector t = P.b() - P.A() * p0;
  const Vector dots = P.A() * v;
  return detail::chord_from_slack(t, dots);
}

inline Chord axis_chord(const HPolytope& P, const Vector& t, int k) {
  return detail::chord_from_slack(t, P.A().col(k));
}

/// Chord along e_k from a freshly computed slack vector.
inline std::pair<Chord, WalkState> chord_cdhr_init(const HPolytope& P, const Point& p0, int k) {
  if (k < 0 || k >= P.dimension()) fail_input("coordinate index out of range");
  WalkState state;
  state.p = p0;
  state.t = slack(P, p0);
  Chord chord = axis_chord(P, state.t, k);
  state.last_coord = k;
  return {chord, std::move(state)};
}

/// Moves the state by c along coordinate k, updating t in O(m). Every 10 d
/// moves, and whenever the cached slack dips below -1e-6, t is recomputed
/// from p.
inline void move_along(const HPolytope& P, WalkState& state, int k, double c) {
  state.p[k] += c;
  state.t.noalias() -= c * P.A().col(k);
  if (++state.steps_since_refresh >= 10 * P.dimension() || state.t.minCoeff() < -1e-6) {
    state.t = P.b() - P.A() * state.p;
    state.steps_since_refresh = 0;
    if (state.t.minCoeff() < -1e-6) fail_numerical("state drift");
  }
}

/// Applies displacement c along the previous coordinate, then returns the
/// chord along e_k, both in O(m).
inline Chord chord_cdhr_step(const HPolytope& P, WalkState& state, double c, int k) {
  if (k < 0 || k >= P.dimension()) fail_input("coordinate index out of range");
  if (!state.last_coord) fail_input("walk state has no previous coordinate");
  move_along(P, state, *state.last_coord, c);
  state.last_coord = k;
  return axis_chord(P, state.t, k);
}

namespace detail {

/// Roots of lambda^2 + 2 lambda bh + cc = 0 for a point inside the ball
/// (cc <= 0), in the cancellation-free form.
inline Chord ball_roots(double bh, double cc) {
  double disc = bh * bh - cc;
  assert(disc > -1e-9 * std::max(1.0, bh * bh));
  disc = std::max(disc, 0.0);
  const double q = -(bh + std::copysign(std::sqrt(disc), bh));
  double r1 = q;
  double r2 = q != 0.0 ? cc / q : 0.0;
  if (r1 > r2) std::swap(r1, r2);
  return Chord{std::min(r1, 0.0), std::max(r2, 0.0)};
}

inline Chord intersect(const Chord& a, const Chord& b) {
  return Chord{std::max(a.lambda_minus, b.lambda_minus), std::min(a.lambda_plus, b.lambda_plus)};
}

}  // namespace detail

/// Chord of the line with the ball alone.
inline Chord ball_chord(const Ball& B, const Point& p0, const Vector& v) {
  const Vector q = p0 - B.center;
  return detail::ball_roots(q.dot(v), q.squaredNorm() - B.radius * B.radius);
}

/// Chord of line ∩ P ∩ B given the line ∩ P chord. The ball roots only
/// matter when an endpoint of the polytope chord lies outside the sphere;
/// taking the inner endpoint of each pair covers both cases.
inline Chord clip_with_ball(const Chord& chord, const Point& p0, const Vector& v, const Ball& B) {
  return detail::intersect(chord, ball_chord(B, p0, v));
}

/// Same clip for an axis direction, using a cached ||p - c||^2.
inline Chord clip_axis_with_ball(const Chord& chord, double offset_k, double norm_sq, const Ball& B) {
  return detail::intersect(chord, detail::ball_roots(offset_k, norm_sq - B.radius * B.radius));
}

/// Body described only by a membership predicate.
template <typename F>
concept MembershipPredicate = requires(const F& f, const Point& x) {
  { f(x) } -> std::convertible_to<bool>;
};

struct MembershipResult {
  Chord chord;
  int iterations = 0;
};

namespace detail {

/// Bisection on [inside, outside] until the bracket is at most eps_s wide;
/// returns the inside end.
template <typename Test>
double bisect(double inside, double outside, double eps_s, const Test& test, int& iterations) {
  while (std::abs(outside - inside) > eps_s) {
    const double mid = 0.5 * (inside + outside);
    ++iterations;
    if (test(mid)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

template <typename Test>
MembershipResult membership_chord(const Test& test, const Ball& bound, const Point& p0,
                                  const Vector& v, double eps_s) {
  if (!(eps_s > 0.0)) fail_input("membership accuracy must be positive");
  if (!test(0.0)) fail_input("start point is not inside the body");
  const Chord outer = ball_chord(bound, p0, v);
  MembershipResult res;
  res.chord.lambda_plus = test(outer.lambda_plus)
                              ? outer.lambda_plus
                              : bisect(0.0, outer.lambda_plus, eps_s, test, res.iterations);
  res.chord.lambda_minus = test(outer.lambda_minus)
                               ? outer.lambda_minus
                               : bisect(0.0, outer.lambda_minus, eps_s, test, res.iterations);
  return res;
}

}  // namespace detail

/// Boundary oracle from membership alone: bisection between p0 and the exit
/// point of the line from the bounding ball.
template <MembershipPredicate Body>
MembershipResult chord_membership(const Body& body, const Ball& bound, const Point& p0,
                                  const Vector& v, double eps_s) {
  return detail::membership_chord([&](double lambda) -> bool { return body(p0 + lambda * v); },
                                  bound, p0, v, eps_s);
}

/// H-polytope membership along a fixed line. The first test against each
/// hyperplane costs O(d) and records where the line crosses it; later tests
/// against that hyperplane compare lambda with the stored crossing in O(1).
class LineMembership {
 public:
  LineMembership(const HPolytope& P, const Point& p0, const Vector& v)
      : P_(P), p0_(p0), v_(v),
        cut_lo_(Vector::Constant(P.num_facets(), -std::numeric_limits<double>::infinity())),
        cut_hi_(Vector::Constant(P.num_facets(), std::numeric_limits<double>::infinity())),
        known_(static_cast<std::size_t>(P.num_facets()), false) {}

  bool operator()(double lambda) const {
    for (int i = 0; i < P_.num_facets(); ++i) {
      if (!known_[static_cast<std::size_t>(i)]) resolve(i);
      if (lambda > cut_hi_[i] || lambda < cut_lo_[i]) return false;
    }
    return true;
  }

 private:
  void resolve(int i) const {
    const double t = P_.b()[i] - P_.A().row(i).dot(p0_);
    const double a = P_.A().row(i).dot(v_);
    if (a > kParallelTol) {
      cut_hi_[i] = (t + kInsideTol) / a;
    } else if (a < -kParallelTol) {
      cut_lo_[i] = (t + kInsideTol) / a;
    } else if (t < -kInsideTol) {
      cut_hi_[i] = -std::numeric_limits<double>::infinity();
    }
    known_[static_cast<std::size_t>(i)] = true;
  }

  const HPolytope& P_;
  const Point& p0_;
  const Vector& v_;
  mutable Vector cut_lo_;
  mutable Vector cut_hi_;
  mutable std::vector<bool> known_;
};

inline MembershipResult chord_membership(const HPolytope& P, const Ball& bound, const Point& p0,
                                         const Vector& v, double eps_s) {
  check_dimension(P, p0);
  LineMembership test(P, p0, v);
  return detail::membership_chord(test, bound, p0, v, eps_s);
}

}  // namespace hvol
