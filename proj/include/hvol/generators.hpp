#pragma once

// Benchmark polytopes in H-representation, with exact volumes where known.

#include "hvol/lp.hpp"
#include "hvol/reduce.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace hvol {

/// x_i <= 1, x_i >= -1
inline HPolytope cube(int d) {
  if (d < 1) fail_input("cube dimension must be at least 1");
  Matrix A(2 * d, d);
  A << Matrix::Identity(d, d), -Matrix::Identity(d, d);
  return HPolytope(std::move(A), Vector::Ones(2 * d));
}

inline double cube_volume(int d) { return std::exp2(d); }

/// sum_i s_i x_i <= 1 for every sign pattern s; 2^d rows.
inline HPolytope cross(int d) {
  if (d < 1) fail_input("cross-polytope dimension must be at least 1");
  if (d > 25) fail_input("cross-polytope dimension above 25 would need more than 2^25 rows");
  const Eigen::Index m = Eigen::Index{1} << d;
  Matrix A(m, d);
  for (Eigen::Index s = 0; s < m; ++s)
    for (int i = 0; i < d; ++i) A(s, i) = ((s >> i) & 1) ? -1.0 : 1.0;
  return HPolytope(std::move(A), Vector::Ones(m));
}

inline double cross_volume(int d) { return std::exp(d * std::numbers::ln2 - std::lgamma(d + 1.0)); }

/// {x >= 0, sum x_i <= 1}
inline HPolytope simplex(int d) {
  if (d < 1) fail_input("simplex dimension must be at least 1");
  Matrix A(d + 1, d);
  A << -Matrix::Identity(d, d), Eigen::RowVectorXd::Ones(d);
  Vector b = Vector::Zero(d + 1);
  b[d] = 1.0;
  return HPolytope(std::move(A), std::move(b));
}

inline double simplex_volume(int d) { return std::exp(-std::lgamma(d + 1.0)); }

/// simplex(d) x simplex(d) in R^{2d}
inline HPolytope simplex_product(int d) {
  const HPolytope s = simplex(d);
  Matrix A = Matrix::Zero(2 * d + 2, 2 * d);
  A.topLeftCorner(d + 1, d) = s.A();
  A.bottomRightCorner(d + 1, d) = s.A();
  Vector b(2 * d + 2);
  b << s.b(), s.b();
  return HPolytope(std::move(A), std::move(b));
}

inline double simplex_product_volume(int d) { return std::exp(-2.0 * std::lgamma(d + 1.0)); }

/// [-100, 100] x [-1, 1]^{d-1} rotated by 30 degrees in the (x_1, x_2) plane.
/// The rotation acts on the constraint columns only.
inline HPolytope skinny_cube(int d) {
  if (d < 2) fail_input("skinny cube dimension must be at least 2");
  HPolytope box = cube(d);
  Vector b = box.b();
  b[0] = 100.0;
  b[d] = 100.0;
  const double c = std::cos(std::numbers::pi / 6.0);
  const double s = std::sin(std::numbers::pi / 6.0);
  Matrix R = Matrix::Identity(d, d);
  R(0, 0) = c;
  R(0, 1) = -s;
  R(1, 0) = s;
  R(1, 1) = c;
  // x in R * box  <=>  A R^T x <= b
  return HPolytope(box.A() * R.transpose(), std::move(b));
}

inline double skinny_cube_volume(int d) { return 100.0 * std::exp2(d); }

inline constexpr int kRandomTangentAttempts = 100;

/// m hyperplanes tangent to the unit sphere at uniform random points;
/// redrawn until the intersection is bounded.
inline HPolytope random_tangent(int d, int m, RngStream& rng) {
  if (d < 1) fail_input("dimension must be at least 1");
  if (m < d + 1) fail_input("random tangent polytope needs m >= d + 1");
  for (int attempt = 0; attempt < kRandomTangentAttempts; ++attempt) {
    Matrix A(m, d);
    for (int i = 0; i < m; ++i) A.row(i) = random_direction(d, rng).transpose();
    HPolytope P(std::move(A), Vector::Ones(m));
    if (check_bounded(P)) return P;
  }
  fail_numerical("random tangent polytope stayed unbounded after " +
                 std::to_string(kRandomTangentAttempts) + " attempts");
}

/// Doubly stochastic n x n matrices over the free (n-1) x (n-1) leading
/// block. Variables are ordered with the last row and column first so that
/// elimination pivots on them and the leading block stays free.
inline ReducedPolytope birkhoff_reduced(int n) {
  if (n < 2) fail_input("Birkhoff polytope needs n >= 2");
  const int N = n * n;
  // Column position of entry (i, j).
  std::vector<int> column(static_cast<std::size_t>(N));
  int next = 0;
  for (int j = 0; j < n; ++j) column[static_cast<std::size_t>((n - 1) * n + j)] = next++;
  for (int i = 0; i < n - 1; ++i) column[static_cast<std::size_t>(i * n + n - 1)] = next++;
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) column[static_cast<std::size_t>(i * n + j)] = next++;

  // n row sums and n - 1 column sums; the last column sum is implied.
  Matrix Aeq = Matrix::Zero(2 * n - 1, N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Aeq(i, column[static_cast<std::size_t>(i * n + j)]) = 1.0;
  for (int j = 0; j < n - 1; ++j)
    for (int i = 0; i < n; ++i) Aeq(n + j, column[static_cast<std::size_t>(i * n + j)]) = 1.0;
  ReducedPolytope red = reduce_to_full_dimension(Aeq, Vector::Ones(2 * n - 1), true);

  // Report the lift in row-major entry order.
  Matrix linear(N, red.lift.linear.cols());
  Vector offset(N);
  for (int e = 0; e < N; ++e) {
    linear.row(e) = red.lift.linear.row(column[static_cast<std::size_t>(e)]);
    offset[e] = red.lift.offset[column[static_cast<std::size_t>(e)]];
  }
  red.lift = AffineLift{std::move(linear), std::move(offset)};
  return red;
}

inline HPolytope birkhoff(int n) { return birkhoff_reduced(n).polytope; }

struct GeneratedPolytope {
  HPolytope polytope;
  std::optional<double> exact_volume;
  std::string name;
};

/// Parses "kind:params" (cube:10, cross:10, simplex:10, simplex-product:5,
/// skinny-cube:10, rh:8:25, birkhoff:5) and builds the polytope. Random
/// kinds draw from `rng`.
inline GeneratedPolytope generate(const std::string& descriptor, RngStream& rng) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = descriptor.find(':', start);
    parts.push_back(descriptor.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto arg = [&](std::size_t i) -> int {
    if (i >= parts.size()) fail_input("generator '" + descriptor + "' is missing a parameter");
    try {
      std::size_t used = 0;
      const int v = std::stoi(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
      return v;
    } catch (const std::exception&) {
      fail_input("generator '" + descriptor + "': bad integer '" + parts[i] + "'");
    }
  };
  auto expect_params = [&](std::size_t count) {
    if (parts.size() != count + 1)
      fail_input("generator '" + parts[0] + "' takes " + std::to_string(count) + " parameter(s)");
  };

  const std::string& kind = parts[0];
  if (kind == "cube") {
    expect_params(1);
    const int d = arg(1);
    return {cube(d), cube_volume(d), descriptor};
  }
  if (kind == "cross") {
    expect_params(1);
    const int d = arg(1);
    return {cross(d), cross_volume(d), descriptor};
  }
  if (kind == "simplex") {
    expect_params(1);
    const int d = arg(1);
    return {simplex(d), simplex_volume(d), descriptor};
  }
  if (kind == "simplex-product") {
    expect_params(1);
    const int d = arg(1);
    return {simplex_product(d), simplex_product_volume(d), descriptor};
  }
  if (kind == "skinny-cube") {
    expect_params(1);
    const int d = arg(1);
    return {skinny_cube(d), skinny_cube_volume(d), descriptor};
  }
  if (kind == "rh") {
    expect_params(2);
    return {random_tangent(arg(1), arg(2), rng), std::nullopt, descriptor};
  }
  if (kind == "birkhoff") {
    expect_params(1);
    return {birkhoff(arg(1)), std::nullopt, descriptor};
  }
  fail_input("unknown generator kind '" + kind + "'");
}

}  // namespace hvol
