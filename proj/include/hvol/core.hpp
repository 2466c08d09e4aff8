#pragma once

// Polytope, ball and ellipsoid representations plus the small linear-algebra
// and randomness primitives shared by every other header.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace hvol {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

/// Slack tolerance for membership: A_i p - b_i <= kInsideTol counts as inside.
inline constexpr double kInsideTol = 1e-9;

enum class ErrorKind {
  invalid_input,  // malformed or inconsistent user data
  numerical       // the computation itself failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& what) {
  throw Error(ErrorKind::invalid_input, what);
}

[[noreturn]] inline void fail_numerical(const std::string& what) {
  throw Error(ErrorKind::numerical, what);
}

/// Dense halfspace system {x | A x <= b}.
///
/// Construction checks shape, finiteness and that no row of A vanishes.
/// Boundedness is a property of the whole system and is only checked on
/// demand (see check_bounded in lp.hpp).
class HPolytope {
 public:
  HPolytope() = default;

  HPolytope(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
    if (A_.rows() == 0 || A_.cols() == 0)
      fail_input("polytope needs at least one row and one column");
    if (A_.rows() != b_.size())
      fail_input("row count of A (" + std::to_string(A_.rows()) +
                 ") differs from length of b (" + std::to_string(b_.size()) + ")");
    if (!A_.allFinite() || !b_.allFinite())
      fail_input("polytope has non-finite entries");
    for (Eigen::Index i = 0; i < A_.rows(); ++i) {
      if (A_.row(i).lpNorm<Eigen::Infinity>() == 0.0)
        fail_input("row " + std::to_string(i) + " of A is zero");
    }
  }

  const Matrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }
  int dimension() const noexcept { return static_cast<int>(A_.cols()); }
  int num_facets() const noexcept { return static_cast<int>(A_.rows()); }

  /// {x + shift | x in P}
  HPolytope translated(const Vector& shift) const {
    return HPolytope(A_, b_ + A_ * shift);
  }

  /// {s x | x in P}, s > 0
  HPolytope scaled(double s) const {
    if (!(s > 0.0)) fail_input("scale factor must be positive");
    return HPolytope(A_, s * b_);
  }

 private:
  Matrix A_;
  Vector b_;
};

struct Ball {
  Point center;
  double radius = 0.0;

  Ball() = default;
  Ball(Point c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0) || !std::isfinite(radius))
      fail_input("ball radius must be positive and finite");
  }

  int dimension() const noexcept { return static_cast<int>(center.size()); }
  bool contains(const Point& p, double tol = kInsideTol) const {
    return (p - center).norm() <= radius + tol;
  }
};

/// {x | (x - center)^T E (x - center) <= 1}
struct Ellipsoid {
  Matrix E;
  Point center;
};

inline void check_dimension(const HPolytope& P, const Point& p) {
  if (p.size() != P.dimension())
    fail_input("point has dimension " + std::to_string(p.size()) +
               " but polytope has dimension " + std::to_string(P.dimension()));
}

/// t = b - A p
inline Vector slack(const HPolytope& P, const Point& p) {
  check_dimension(P, p);
  return P.b() - P.A() * p;
}

inline bool contains(const HPolytope& P, const Point& p) {
  return slack(P, p).minCoeff() >= -kInsideTol;
}

/// Lower-triangular L with L L^T = M.
inline Matrix cholesky(const Matrix& M) {
  if (M.rows() != M.cols()) fail_input("cholesky needs a square matrix");
  const Eigen::Index n = M.rows();
  Matrix L = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = M(j, j) - L.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0) || !std::isfinite(pivot)) fail_numerical("not positive definite");
    L(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      L(i, j) = (M(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
  }
  return L;
}

/// Natural log of the volume of the d-ball of radius r.
inline double log_ball_volume(int d, double r) {
  const double h = 0.5 * d;
  return h * std::log(std::numbers::pi) + d * std::log(r) - std::lgamma(h + 1.0);
}

inline double ball_volume(int d, double r) {
  if (d < 1) fail_input("ball dimension must be at least 1");
  if (!(r > 0.0)) fail_input("ball radius must be positive");
  return std::exp(log_ball_volume(d, r));
}

/// Seeded random source. Streams with equal (seed, stream) pairs produce
/// equal draws; distinct stream indices give independent substreams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  RngStream substream(std::uint64_t index) const { return RngStream(seed_, index); }

  /// Uniform in [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }

  double normal() { return normal_(engine_); }

  /// Uniform integer in [0, k).
  int uniform_int(int k) {
    std::uniform_int_distribution<int> dist(0, k - 1);
    return dist(engine_);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Uniformly distributed unit vector.
inline Vector random_direction(int d, RngStream& rng) {
  Vector v(d);
  double n2 = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    n2 = v.squaredNorm();
  } while (n2 == 0.0);
  return v / std::sqrt(n2);
}

inline Point random_point_in_ball(const Ball& B, RngStream& rng) {
  const int d = B.dimension();
  Vector v = random_direction(d, rng);
  const double radius = B.radius * std::pow(rng.uniform(), 1.0 / d);
  return B.center + radius * v;
}

}  // namespace hvol
