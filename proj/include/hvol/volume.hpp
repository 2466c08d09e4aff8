#pragma once

// Multiphase Monte Carlo volume estimation.
//
// After translating the inscribed ball's center to the origin, the body P is
// cut by the balls B(0, 2^{i/d}), i = alpha..beta, where 2^{alpha/d} <= r
// (inner radius) and 2^{beta/d} >= rho (largest sample norm). The volume is
// vol(B(0, 2^{alpha/d})) times the product of the ratios
// vol(P_i) / vol(P_{i-1}), each estimated as N / (number of the N points
// of P_i that land in P_{i-1}). Phases run from beta downwards: points that
// survive into the smaller ball are kept and only the missing ones are
// regenerated by walking inside it.

#include "hvol/lp.hpp"
#include "hvol/rounding.hpp"
#include "hvol/walks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace hvol {

struct RoundingOption {
  bool enabled = false;
  double threshold = 1.5;
};

struct VolumeParams {
  double epsilon = 1.0;
  WalkParams walk;
  RoundingOption rounding;
  std::optional<long> sample_count;  // overrides the N formula
  std::uint64_t seed = 0;
};

struct VolumeEstimate {
  double volume = 0.0;
  double log_volume = 0.0;
  long N = 0;
  int W = 0;
  int alpha = 0;
  int beta = 0;
  std::vector<long> counts;     // phase beta first
  std::vector<long> topped_up;  // points walked after each phase's filter
  std::vector<double> ratios;   // counts[i] / N
  double det_correction = 1.0;  // vol(P) = vol(rounded) / det_correction
  int rounding_iterations = 0;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  double elapsed_seconds = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<std::string> warnings;
};

/// floor(400 eps^-2 d ln d); the ln d factor is dropped for d = 1.
inline long sample_count(int d, double epsilon) {
  if (d < 1) fail_input("dimension must be at least 1");
  if (!(epsilon > 0.0)) fail_input("epsilon must be positive");
  const double base = 400.0 / (epsilon * epsilon);
  if (d == 1) return static_cast<long>(std::floor(base));
  return static_cast<long>(std::floor(base * d * std::log(static_cast<double>(d))));
}

struct BallSequence {
  int alpha = 0;
  int beta = 0;
  std::vector<double> radii;  // 2^{i/d}, i = alpha..beta
};

inline double phase_radius(int i, int d) { return std::exp2(static_cast<double>(i) / d); }

/// alpha = floor(d log2 r), beta = ceil(d log2 rho), nudged so that
/// 2^{alpha/d} <= r and 2^{beta/d} >= rho hold in floating point.
inline BallSequence ball_sequence(double r, double rho, int d) {
  if (!(r > 0.0) || !(rho >= r)) fail_input("ball sequence needs 0 < r <= rho");
  if (d < 1) fail_input("dimension must be at least 1");
  BallSequence seq;
  seq.alpha = static_cast<int>(std::floor(d * std::log2(r)));
  seq.beta = static_cast<int>(std::ceil(d * std::log2(rho)));
  while (phase_radius(seq.alpha, d) > r) --seq.alpha;
  while (phase_radius(seq.beta, d) < rho) ++seq.beta;
  for (int i = seq.alpha; i <= seq.beta; ++i) seq.radii.push_back(phase_radius(i, d));
  return seq;
}

namespace detail {

inline constexpr double kStarvedRatioFloor = 0.1;

/// MMC over a body containing B(0, inner_radius), starting from N samples of
/// the body. Fills the phase fields of `out` and returns log vol.
template <ConvexBody Body>
double multiphase(const Body& body, double inner_radius, std::vector<Point> samples,
                  const WalkParams& walk, long N, int W, RngStream& rng, VolumeEstimate& out) {
  const int d = body_dimension(body);
  double rho_sq = 0.0;
  for (const Point& s : samples) rho_sq = std::max(rho_sq, s.squaredNorm());
  const double rho = std::max(std::sqrt(rho_sq), inner_radius);

  const BallSequence seq = ball_sequence(inner_radius, rho, d);
  out.alpha = seq.alpha;
  out.beta = seq.beta;
  out.inner_radius = inner_radius;
  out.outer_radius = rho;

  double log_vol = log_ball_volume(d, phase_radius(seq.alpha, d));
  Walker<Body> walker(body, walk);
  for (int i = seq.beta; i > seq.alpha; --i) {
    const double small = phase_radius(i - 1, d);
    const double small_sq = small * small;
    std::erase_if(samples, [&](const Point& s) { return s.squaredNorm() > small_sq; });
    const long count = static_cast<long>(samples.size());
    if (count == 0) fail_numerical("phase starved");
    out.counts.push_back(count);
    out.ratios.push_back(static_cast<double>(count) / static_cast<double>(N));
    if (out.ratios.back() < kStarvedRatioFloor) {
      out.warnings.push_back("phase " + std::to_string(i) + ": only " + std::to_string(count) +
                             " of " + std::to_string(N) + " points in the next ball");
    }
    log_vol += std::log(static_cast<double>(N) / static_cast<double>(count));

    if (i - 1 > seq.alpha) {
      const Ball ball(Point::Zero(d), small);
      walker.set_ball(&ball);
      walker.reset(samples.front());
      samples.reserve(static_cast<std::size_t>(N));
      long walked = 0;
      for (; static_cast<long>(samples.size()) < N; ++walked) samples.push_back(walker.walk(W, rng));
      walker.set_ball(nullptr);
      out.topped_up.push_back(walked);
    } else {
      out.topped_up.push_back(0);
    }
  }
  return log_vol;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void finish(VolumeEstimate& est, double log_vol, const Stopwatch& clock) {
  est.log_volume = log_vol - std::log(est.det_correction);
  est.volume = std::exp(est.log_volume);
  est.elapsed_seconds = clock.seconds();
}

}  // namespace detail

/// Volume of a bounded full-dimensional H-polytope.
inline VolumeEstimate estimate_volume(const HPolytope& P, const VolumeParams& params, RngStream& rng) {
  detail::Stopwatch clock;
  const int d = P.dimension();
  if (P.num_facets() < d + 1) fail_input("a bounded polytope needs at least d + 1 facets");

  VolumeEstimate est;
  est.seed = rng.seed();
  est.stream = rng.stream();
  est.N = params.sample_count.value_or(sample_count(d, params.epsilon));
  if (est.N < 1) fail_input("sample count must be positive");
  est.W = effective_walk_length(params.walk, d);

  const Ball cheb = chebyshev_ball(P);
  HPolytope Q = P.translated(-cheb.center);
  double r = cheb.radius;
  std::vector<Point> samples;

  if (params.rounding.enabled) {
    Point start = random_point_in_ball(Ball(Point::Zero(d), r), rng);
    RoundingResult rr =
        iterative_round(Q, params.rounding.threshold, est.N, params.walk, rng, std::move(start));
    est.det_correction = rr.det_correction;
    est.rounding_iterations = rr.iterations;
    if (!rr.converged) {
      est.warnings.push_back("rounding stopped at the iteration cap with axes ratio " +
                             std::to_string(rr.final_axes_ratio));
    }
    const Ball inner = chebyshev_ball(rr.polytope);
    Q = rr.polytope.translated(-inner.center);
    r = inner.radius;
    samples = std::move(rr.samples);
    for (Point& s : samples) s -= inner.center;
  } else {
    Walker<HPolytope> walker(Q, params.walk);
    walker.reset(random_point_in_ball(Ball(Point::Zero(d), r), rng));
    samples.reserve(static_cast<std::size_t>(est.N));
    for (long i = 0; i < est.N; ++i) samples.push_back(walker.walk(est.W, rng));
  }

  const double log_vol = detail::multiphase(Q, r, std::move(samples), params.walk, est.N, est.W, rng, est);
  detail::finish(est, log_vol, clock);
  return est;
}

/// Volume of a Euclidean ball run through the same multiphase machinery,
/// with the inner ball B(center, inner_radius). Every phase ratio is then a
/// pure ball-in-ball ratio, which makes this a consistency check of the
/// estimator itself.
inline VolumeEstimate estimate_volume(const BallBody& body, double inner_radius,
                                      const VolumeParams& params, RngStream& rng) {
  detail::Stopwatch clock;
  const int d = body_dimension(body);
  if (!(inner_radius > 0.0) || inner_radius > body.ball.radius)
    fail_input("inner radius must lie in (0, radius]");
  VolumeEstimate est;
  est.seed = rng.seed();
  est.stream = rng.stream();
  est.N = params.sample_count.value_or(sample_count(d, params.epsilon));
  est.W = effective_walk_length(params.walk, d);

  const BallBody centered{Ball(Point::Zero(d), body.ball.radius)};
  Walker<BallBody> walker(centered, params.walk);
  walker.reset(random_point_in_ball(Ball(Point::Zero(d), inner_radius), rng));
  std::vector<Point> samples;
  samples.reserve(static_cast<std::size_t>(est.N));
  for (long i = 0; i < est.N; ++i) samples.push_back(walker.walk(est.W, rng));

  const double log_vol =
      detail::multiphase(centered, inner_radius, std::move(samples), params.walk, est.N, est.W, rng, est);
  detail::finish(est, log_vol, clock);
  return est;
}

struct RunRecord {
  int index = 0;
  std::optional<VolumeEstimate> estimate;
  std::string error;
  ErrorKind error_kind = ErrorKind::numerical;
};

/// Aggregate of repeated estimates; error measures need an exact volume.
struct RunStatistics {
  int k = 0;
  int failures = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std_dev = 0.0;
  std::optional<double> exact_volume;
  std::optional<double> rel_err_mean;  // (vol - mean) / vol
  double spread = 0.0;                 // (max - min) / mean
  double total_seconds = 0.0;
  std::vector<RunRecord> runs;
};

/// Recomputes the aggregate fields from the per-run records.
inline void summarize(RunStatistics& stats) {
  std::vector<double> values;
  stats.failures = 0;
  stats.total_seconds = 0.0;
  for (const RunRecord& run : stats.runs) {
    if (run.estimate) {
      values.push_back(run.estimate->volume);
      stats.total_seconds += run.estimate->elapsed_seconds;
    } else {
      ++stats.failures;
    }
  }
  stats.k = static_cast<int>(stats.runs.size());
  if (values.empty()) return;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  stats.mean = sum / n;
  stats.min = *std::min_element(values.begin(), values.end());
  stats.max = *std::max_element(values.begin(), values.end());
  // Rounding can put the mean a few ulps outside [min, max] for equal values.
  stats.mean = std::clamp(stats.mean, stats.min, stats.max);
  double ss = 0.0;
  for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
  stats.std_dev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  stats.spread = (stats.max - stats.min) / stats.mean;
  if (stats.exact_volume) stats.rel_err_mean = (*stats.exact_volume - stats.mean) / *stats.exact_volume;
}

/// k independent estimates; repetition i draws from substream i of the
/// master seed, so results do not depend on `parallel`.
template <typename Estimator>
RunStatistics run_repetitions(const Estimator& estimator, std::uint64_t seed, int k,
                              std::optional<double> exact_volume, int parallel) {
  if (k < 1) fail_input("repetition count must be at least 1");
  if (parallel < 1) fail_input("parallelism must be at least 1");
  RunStatistics stats;
  stats.exact_volume = exact_volume;
  stats.runs.resize(static_cast<std::size_t>(k));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < k; i = next++) {
      RunRecord& rec = stats.runs[static_cast<std::size_t>(i)];
      rec.index = i;
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      try {
        rec.estimate = estimator(rng);
      } catch (const Error& e) {
        rec.error = e.what();
        rec.error_kind = e.kind();
      }
    }
  };
  const int threads = std::min(parallel, k);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  summarize(stats);
  return stats;
}

inline RunStatistics estimate_with_statistics(const HPolytope& P, const VolumeParams& params, int k,
                                              std::optional<double> exact_volume = std::nullopt,
                                              int parallel = 1) {
  // Input problems are the same for every repetition; surface them once.
  if (P.num_facets() < P.dimension() + 1) fail_input("a bounded polytope needs at least d + 1 facets");
  return run_repetitions([&](RngStream& rng) { return estimate_volume(P, params, rng); },
                         params.seed, k, exact_volume, parallel);
}

}  // namespace hvol
