#pragma once

// Iterative rounding: sample, fit an approximate minimum-volume enclosing
// ellipsoid, map it to the unit ball by its Cholesky factor, repeat.

#include "hvol/walks.hpp"

#include <string>
#include <vector>

namespace hvol {

/// Per-iteration record of Khachiyan's ascent.
struct MveeTrace {
  std::vector<double> log_det;  // log det of the lifted weighted scatter matrix
  int iterations = 0;
};

namespace detail {

inline Matrix lifted_points(const std::vector<Point>& S) {
  const Eigen::Index d = S.front().size();
  Matrix Q(d + 1, static_cast<Eigen::Index>(S.size()));
  for (std::size_t j = 0; j < S.size(); ++j) {
    if (S[j].size() != d) fail_input("sample points have mixed dimensions");
    Q.col(static_cast<Eigen::Index>(j)) << S[j], 1.0;
  }
  return Q;
}

}  // namespace detail

/// Khachiyan's barycentric coordinate ascent on the lifted point set
/// q_j = (x_j, 1). Each iteration moves weight kappa = (g - d - 1) /
/// ((d + 1)(g - 1)) onto the point of largest lifted Mahalanobis distance g
/// and stops once g <= (1 + eps)(d + 1). The inverse scatter matrix and all
/// distances are maintained by rank-one updates in O(n d) per iteration and
/// refreshed from scratch every 256 iterations.
///
/// The returned matrix is rescaled so the farthest sample lies exactly on
/// the boundary.
inline Ellipsoid mvee(const std::vector<Point>& S, double eps = 0.01, MveeTrace* trace = nullptr,
                      int max_iterations = 100000) {
  if (S.empty()) fail_input("flat sample");
  const Eigen::Index d = S.front().size();
  const Eigen::Index n = static_cast<Eigen::Index>(S.size());
  if (n < d + 1) fail_input("flat sample");
  if (!(eps > 0.0)) fail_input("mvee accuracy must be positive");

  const Matrix Q = detail::lifted_points(S);
  Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));

  Matrix X;
  Matrix Xinv;
  Vector M;
  double log_det = 0.0;
  auto refresh = [&] {
    X = Q * u.asDiagonal() * Q.transpose();
    Eigen::LLT<Matrix> llt(X);
    if (llt.info() != Eigen::Success) fail_input("flat sample");
    const Vector diag = Matrix(llt.matrixL()).diagonal();
    if (diag.minCoeff() <= 1e-9 * diag.maxCoeff()) fail_input("flat sample");
    log_det = 2.0 * diag.array().log().sum();
    Xinv = llt.solve(Matrix::Identity(d + 1, d + 1));
    M = (Q.array() * (Xinv * Q).array()).colwise().sum().transpose();
  };
  refresh();
  if (trace) trace->log_det.push_back(log_det);

  const double dd = static_cast<double>(d);
  const double stop = (1.0 + eps) * (dd + 1.0);
  int it = 0;
  for (; it < max_iterations; ++it) {
    Eigen::Index j = 0;
    const double g = M.maxCoeff(&j);
    if (g <= stop) break;
    const double kappa = (g - dd - 1.0) / ((dd + 1.0) * (g - 1.0));

    const double a = kappa / (1.0 - kappa);
    const double den = 1.0 + a * g;
    const Vector w = Xinv * Q.col(j);
    const Vector z = Q.transpose() * w;
    Xinv = (Xinv - (a / den) * w * w.transpose()) / (1.0 - kappa);
    M = (M - (a / den) * z.cwiseAbs2()) / (1.0 - kappa);
    log_det += (dd + 1.0) * std::log1p(-kappa) + std::log(den);
    u *= 1.0 - kappa;
    u[j] += kappa;

    if ((it + 1) % 256 == 0) refresh();
    if (trace) trace->log_det.push_back(log_det);
  }
  if (trace) trace->iterations = it;

  Matrix P = Q.topRows(d);
  Point c = P * u;
  Matrix scatter = P * u.asDiagonal() * P.transpose() - c * c.transpose();
  Eigen::LLT<Matrix> llt(scatter);
  if (llt.info() != Eigen::Success) fail_input("flat sample");
  Matrix E = llt.solve(Matrix::Identity(d, d)) / dd;
  E = 0.5 * (E + E.transpose());

  const Matrix diffs = P.colwise() - c;
  const double reach = (diffs.array() * (E * diffs).array()).colwise().sum().maxCoeff();
  E /= reach;
  return Ellipsoid{std::move(E), std::move(c)};
}

/// Lengths of the principal semi-axes, ascending.
inline Vector ellipsoid_axes(const Ellipsoid& ell) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(ell.E, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    fail_numerical("not positive definite");
  return es.eigenvalues().cwiseSqrt().cwiseInverse().reverse();
}

inline double axes_ratio(const Ellipsoid& ell) {
  const Vector axes = ellipsoid_axes(ell);
  return axes.maxCoeff() / axes.minCoeff();
}

/// Change of variables y = L^T (x - center), E = L L^T, which maps the
/// ellipsoid onto the unit ball.
struct RoundingTransform {
  Matrix L;
  Point center;

  Vector to_rounded(const Point& x) const { return L.transpose() * (x - center); }
  Point to_original(const Vector& y) const {
    return center + L.transpose().triangularView<Eigen::Upper>().solve(y);
  }
  /// det(L^T)
  double det() const { return L.diagonal().prod(); }
};

struct RoundedPolytope {
  HPolytope polytope;
  double det_factor = 1.0;  // det(L^T); vol(P) = vol(P') / det_factor
  RoundingTransform transform;
};

/// P' = {y | A (L^T)^{-1} y <= b - A c}.
inline RoundedPolytope apply_rounding(const HPolytope& P, const Ellipsoid& ell) {
  if (ell.center.size() != P.dimension() || ell.E.rows() != P.dimension())
    fail_input("ellipsoid dimension does not match polytope");
  RoundingTransform tf{cholesky(ell.E), ell.center};
  // A (L^T)^{-1} = (L^{-1} A^T)^T
  Matrix A = tf.L.triangularView<Eigen::Lower>().solve(P.A().transpose()).transpose();
  Vector b = P.b() - P.A() * ell.center;
  const double det = tf.det();
  return RoundedPolytope{HPolytope(std::move(A), std::move(b)), det, std::move(tf)};
}

struct RoundingResult {
  HPolytope polytope;
  double det_correction = 1.0;  // product of det(L^T) over iterations
  int iterations = 0;
  double final_axes_ratio = 1.0;
  bool converged = false;
  std::vector<double> axes_ratios;
  std::vector<Point> samples;  // last sample set, in the rounded coordinates
  Point start;                 // walk point, in the rounded coordinates
};

inline constexpr int kMaxRoundingIterations = 10;

/// Repeats {N walk samples, mvee, transform} until the max/min axes ratio of
/// the fitted ellipsoid drops below `threshold` or the iteration cap is hit
/// (then `converged` is false and the last transform is kept).
inline RoundingResult iterative_round(const HPolytope& P, double threshold, long N,
                                      const WalkParams& params, RngStream& rng, Point start,
                                      double mvee_eps = 0.01) {
  if (!(threshold > 1.0)) fail_input("rounding threshold must exceed 1");
  if (N < P.dimension() + 1) fail_input("rounding needs at least d + 1 samples");
  if (!contains(P, start)) fail_input("rounding start point is outside the polytope");

  const int W = effective_walk_length(params, P.dimension());
  RoundingResult res{P, 1.0, 0, 0.0, false, {}, {}, std::move(start)};
  for (int it = 0; it < kMaxRoundingIterations; ++it) {
    Walker<HPolytope> walker(res.polytope, params);
    walker.reset(res.start);
    std::vector<Point> S;
    S.reserve(static_cast<std::size_t>(N));
    for (long i = 0; i < N; ++i) S.push_back(walker.walk(W, rng));

    const Ellipsoid ell = mvee(S, mvee_eps);
    const double ratio = axes_ratio(ell);
    RoundedPolytope rounded = apply_rounding(res.polytope, ell);

    for (Point& s : S) s = rounded.transform.to_rounded(s);
    res.start = rounded.transform.to_rounded(walker.point());
    res.polytope = std::move(rounded.polytope);
    res.det_correction *= rounded.det_factor;
    res.samples = std::move(S);
    res.iterations = it + 1;
    res.final_axes_ratio = ratio;
    res.axes_ratios.push_back(ratio);
    if (ratio < threshold) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace hvol
