#pragma once

// Hit-and-run samplers over P (optionally intersected with a ball).

#include "hvol/lp.hpp"
#include "hvol/oracles.hpp"

#include <concepts>
#include <optional>

namespace hvol {

enum class WalkType { cdhr, rdhr };
enum class OracleType { facet, membership };

struct WalkParams {
  WalkType variant = WalkType::cdhr;
  int walk_length = 0;  // steps per generated point; 0 selects default_walk_length(d)
  OracleType oracle = OracleType::facet;
  double eps_s = 1e-6;  // membership oracle accuracy
};

/// floor(10 + d / 10)
inline int default_walk_length(int d) {
  if (d < 1) fail_input("dimension must be at least 1");
  return 10 + d / 10;
}

inline int effective_walk_length(const WalkParams& params, int d) {
  if (params.walk_length < 0) fail_input("walk length must be positive");
  return params.walk_length == 0 ? default_walk_length(d) : params.walk_length;
}

namespace detail {

/// Chords shorter than this leave the point where it is.
inline constexpr double kDegenerateChord = 1e-12;

inline double sample_on_chord(const Chord& chord, RngStream& rng) {
  return chord.lambda_minus + rng.uniform() * chord.length();
}

}  // namespace detail

inline WalkState make_walk_state(const HPolytope& P, const Point& p, const Ball* ball = nullptr) {
  WalkState state;
  state.p = p;
  state.t = slack(P, p);
  if (ball) state.ball_norm_sq = (p - ball->center).squaredNorm();
  return state;
}

/// Random-direction step using the full facet scan.
inline Point rdhr_step(const HPolytope& P, const Ball* ball, const Point& p, RngStream& rng) {
  const Vector v = random_direction(P.dimension(), rng);
  Chord chord = chord_facets(P, p, v);
  if (ball) chord = clip_with_ball(chord, p, v, *ball);
  if (chord.length() < detail::kDegenerateChord) return p;
  return p + detail::sample_on_chord(chord, rng) * v;
}

/// Coordinate-direction step on the amortized slack state. The ball's
/// squared-distance cache is updated in O(1) since one coordinate moves.
inline void cdhr_step(const HPolytope& P, const Ball* ball, WalkState& state, RngStream& rng) {
  if (state.t.size() != P.num_facets()) state = make_walk_state(P, state.p, ball);
  const int k = rng.uniform_int(P.dimension());
  Chord chord = axis_chord(P, state.t, k);
  double offset = 0.0;
  if (ball) {
    offset = state.p[k] - ball->center[k];
    chord = clip_axis_with_ball(chord, offset, state.ball_norm_sq, *ball);
  }
  state.last_coord = k;
  if (chord.length() < detail::kDegenerateChord) return;
  const double lambda = detail::sample_on_chord(chord, rng);
  move_along(P, state, k, lambda);
  if (ball) {
    state.ball_norm_sq = state.steps_since_refresh == 0
                             ? (state.p - ball->center).squaredNorm()
                             : state.ball_norm_sq + lambda * (2.0 * offset + lambda);
  }
}

/// Body supplying a boundary oracle through `body_chord` and membership
/// through `body_contains`, found by argument-dependent lookup.
template <typename B>
concept ConvexBody = requires(const B& body, const Point& p, const Vector& v) {
  { body_dimension(body) } -> std::convertible_to<int>;
  { body_chord(body, p, v) } -> std::same_as<Chord>;
  { body_contains(body, p) } -> std::convertible_to<bool>;
};

inline int body_dimension(const HPolytope& P) { return P.dimension(); }
inline Chord body_chord(const HPolytope& P, const Point& p, const Vector& v) {
  return chord_facets(P, p, v);
}
inline bool body_contains(const HPolytope& P, const Point& p) { return contains(P, p); }

/// A Euclidean ball used as a convex body in its own right.
struct BallBody {
  Ball ball;
};
inline int body_dimension(const BallBody& B) { return B.ball.dimension(); }
inline Chord body_chord(const BallBody& B, const Point& p, const Vector& v) {
  return ball_chord(B.ball, p, v);
}
inline bool body_contains(const BallBody& B, const Point& p) { return B.ball.contains(p); }

/// Persistent hit-and-run chain over a body, optionally restricted to a
/// ball. Generic bodies use their own boundary oracle for both variants.
template <ConvexBody Body>
class Walker {
 public:
  Walker(const Body& body, WalkParams params) : body_(body), params_(params) {}

  void set_ball(const Ball* ball) { ball_ = ball; }
  void reset(const Point& p) { p_ = p; }
  const Point& point() const { return p_; }

  void step(RngStream& rng) {
    const int d = body_dimension(body_);
    Vector v;
    if (params_.variant == WalkType::rdhr) {
      v = random_direction(d, rng);
    } else {
      v = Vector::Unit(d, rng.uniform_int(d));
    }
    Chord chord = body_chord(body_, p_, v);
    if (ball_) chord = clip_with_ball(chord, p_, v, *ball_);
    if (chord.length() < detail::kDegenerateChord) return;
    p_ += detail::sample_on_chord(chord, rng) * v;
  }

  const Point& walk(int steps, RngStream& rng) {
    for (int s = 0; s < steps; ++s) step(rng);
    return p_;
  }

 private:
  const Body& body_;
  WalkParams params_;
  const Ball* ball_ = nullptr;
  Point p_;
};

/// Polytope chain. CDHR with the facet oracle runs on the amortized slack
/// state; RDHR scans every facet; the membership oracle bisects inside the
/// current ball, or inside a ball around the LP bounding box when no ball is
/// set.
template <>
class Walker<HPolytope> {
 public:
  Walker(const HPolytope& P, WalkParams params) : P_(P), params_(params) {
    if (params_.oracle == OracleType::membership) {
      const auto box = bounding_box(P_);
      if (!box) fail_input("unbounded polytope");
      const Point mid = 0.5 * (box->lower + box->upper);
      bound_ = Ball(mid, 0.5 * (box->upper - box->lower).norm() + 1.0);
    }
  }

  void set_ball(const Ball* ball) {
    ball_ = ball;
    if (ball_ && state_.p.size() > 0) state_.ball_norm_sq = (state_.p - ball_->center).squaredNorm();
  }

  void reset(const Point& p) {
    if (params_.variant == WalkType::cdhr && params_.oracle == OracleType::facet) {
      state_ = make_walk_state(P_, p, ball_);
    } else {
      state_ = WalkState{};
      state_.p = p;
    }
  }

  const Point& point() const { return state_.p; }
  const WalkState& state() const { return state_; }

  void step(RngStream& rng) {
    if (params_.oracle == OracleType::facet) {
      if (params_.variant == WalkType::cdhr) {
        cdhr_step(P_, ball_, state_, rng);
      } else {
        state_.p = rdhr_step(P_, ball_, state_.p, rng);
      }
      return;
    }
    const int d = P_.dimension();
    const Vector v = params_.variant == WalkType::rdhr ? random_direction(d, rng)
                                                       : Vector(Vector::Unit(d, rng.uniform_int(d)));
    const Chord chord =
        chord_membership(P_, ball_ ? *ball_ : bound_, state_.p, v, params_.eps_s).chord;
    if (chord.length() < detail::kDegenerateChord) return;
    state_.p += detail::sample_on_chord(chord, rng) * v;
  }

  const Point& walk(int steps, RngStream& rng) {
    for (int s = 0; s < steps; ++s) step(rng);
    return state_.p;
  }

 private:
  const HPolytope& P_;
  WalkParams params_;
  const Ball* ball_ = nullptr;
  Ball bound_;
  WalkState state_;
};

/// W steps of the chosen variant from p.
inline Point walk(const HPolytope& P, const Ball* ball, const Point& p, const WalkParams& params,
                  RngStream& rng) {
  const int steps = effective_walk_length(params, P.dimension());
  Walker<HPolytope> walker(P, params);
  walker.set_ball(ball);
  walker.reset(p);
  return walker.walk(steps, rng);
}

}  // namespace hvol
