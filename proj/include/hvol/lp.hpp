#pragma once

// Dense two-phase simplex for the small LPs the volume pipeline needs:
// the Chebyshev ball and the boundedness / bounding-box checks.

#include "hvol/core.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace hvol {

/// maximize c^T y  subject to  G y <= h,  y_j >= 0 where nonneg[j].
struct LinearProgram {
  Vector objective;
  Matrix G;
  Vector h;
  std::vector<bool> nonneg;  // empty means every variable is free
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector y;
  double value = 0.0;
};

namespace detail {

class SimplexTableau {
 public:
  static constexpr double kTol = 1e-9;

  SimplexTableau(Matrix T, std::vector<int> basis, long pivot_limit)
      : T_(std::move(T)), basis_(std::move(basis)), pivot_limit_(pivot_limit) {}

  Matrix& table() { return T_; }
  const std::vector<int>& basis() const { return basis_; }
  long pivots() const { return pivots_; }

  Eigen::Index rows() const { return T_.rows() - 1; }
  Eigen::Index cols() const { return T_.cols() - 1; }
  double& rhs(Eigen::Index r) { return T_(r, cols()); }
  auto objective_row() { return T_.row(rows()); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    if (++pivots_ > pivot_limit_) fail_numerical("pivot limit");
    T_.row(r) /= T_(r, c);
    T_(r, c) = 1.0;
    for (Eigen::Index i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = T_(i, c);
      if (f != 0.0) {
        T_.row(i) -= f * T_.row(r);
        T_(i, c) = 0.0;
      }
    }
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }

  /// Runs primal simplex on the objective row (reduced costs; negative entries
  /// improve a maximization). Columns >= allowed_cols never enter. Largest
  /// coefficient pricing, switching to Bland's rule while pivots are
  /// degenerate. Returns false when the LP is unbounded.
  bool optimize(Eigen::Index allowed_cols) {
    bool bland = false;
    for (;;) {
      Eigen::Index enter = -1;
      double best = -kTol;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        const double z = T_(rows(), j);
        if (z < best) {
          enter = j;
          if (bland) break;
          best = z;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = T_(i, enter);
        if (a <= kTol) continue;
        const double ratio = T_(i, cols()) / a;
        if (ratio < best_ratio - kTol ||
            (ratio <= best_ratio + kTol && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best_ratio = std::min(ratio, best_ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      bland = best_ratio <= kTol;
      pivot(leave, enter);
    }
  }

 private:
  Matrix T_;
  std::vector<int> basis_;
  long pivot_limit_;
  long pivots_ = 0;
};

}  // namespace detail

inline LpSolution solve(const LinearProgram& lp) {
  const Eigen::Index k = lp.G.rows();
  const Eigen::Index n = lp.G.cols();
  if (k < 1 || n < 1) fail_input("linear program needs at least one row and one variable");
  if (lp.objective.size() != n || lp.h.size() != k)
    fail_input("linear program has inconsistent shapes");
  if (!lp.nonneg.empty() && lp.nonneg.size() != static_cast<std::size_t>(n))
    fail_input("nonnegativity flags must cover every variable");
  if (!lp.G.allFinite() || !lp.h.allFinite() || !lp.objective.allFinite())
    fail_input("linear program has non-finite entries");

  // Column layout: structural (free variables split into +/- parts), slacks,
  // then artificials for rows with negative right-hand side.
  std::vector<Eigen::Index> plus_col(n), minus_col(n, -1);
  Eigen::Index nstruct = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    plus_col[j] = nstruct++;
    const bool nn = !lp.nonneg.empty() && lp.nonneg[static_cast<std::size_t>(j)];
    if (!nn) minus_col[j] = nstruct++;
  }
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < k; ++i)
    if (lp.h[i] < 0.0) art_rows.push_back(i);
  const Eigen::Index nslack = k;
  const Eigen::Index nart = static_cast<Eigen::Index>(art_rows.size());
  const Eigen::Index ncols = nstruct + nslack + nart;

  Matrix T = Matrix::Zero(k + 1, ncols + 1);
  std::vector<int> basis(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      T(i, plus_col[j]) = lp.G(i, j);
      if (minus_col[j] >= 0) T(i, minus_col[j]) = -lp.G(i, j);
    }
    T(i, nstruct + i) = 1.0;
    T(i, ncols) = lp.h[i];
    basis[static_cast<std::size_t>(i)] = static_cast<int>(nstruct + i);
  }
  for (Eigen::Index a = 0; a < nart; ++a) {
    const Eigen::Index i = art_rows[static_cast<std::size_t>(a)];
    T.row(i) *= -1.0;
    T(i, nstruct + nslack + a) = 1.0;
    basis[static_cast<std::size_t>(i)] = static_cast<int>(nstruct + nslack + a);
  }

  detail::SimplexTableau tab(std::move(T), std::move(basis), 50 * (k + n));
  Matrix& tt = tab.table();

  if (nart > 0) {
    // Phase one: maximize -(sum of artificials).
    tt.row(k).setZero();
    for (Eigen::Index a = 0; a < nart; ++a) tt(k, nstruct + nslack + a) = 1.0;
    for (Eigen::Index a = 0; a < nart; ++a) tt.row(k) -= tt.row(art_rows[static_cast<std::size_t>(a)]);
    tab.optimize(ncols);
    if (tt(k, ncols) < -1e-7 * std::max(1.0, lp.h.cwiseAbs().maxCoeff())) {
      return LpSolution{LpStatus::infeasible, Vector(), 0.0};
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < k; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < nstruct + nslack) continue;
      for (Eigen::Index j = 0; j < nstruct + nslack; ++j) {
        if (std::abs(tt(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase two objective row: z_j = c_B B^-1 a_j - c_j.
  Vector cost = Vector::Zero(ncols);
  for (Eigen::Index j = 0; j < n; ++j) {
    cost[plus_col[j]] = lp.objective[j];
    if (minus_col[j] >= 0) cost[minus_col[j]] = -lp.objective[j];
  }
  tt.row(k).setZero();
  tt.row(k).head(ncols) = -cost.transpose();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double cb = cost[tab.basis()[static_cast<std::size_t>(i)]];
    if (cb != 0.0) tt.row(k) += cb * tt.row(i);
  }
  if (!tab.optimize(nstruct + nslack)) return LpSolution{LpStatus::unbounded, Vector(), 0.0};

  Vector values = Vector::Zero(ncols);
  for (Eigen::Index i = 0; i < k; ++i) values[tab.basis()[static_cast<std::size_t>(i)]] = tt(i, ncols);
  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.y.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sol.y[j] = values[plus_col[j]] - (minus_col[j] >= 0 ? values[minus_col[j]] : 0.0);
  }
  sol.value = lp.objective.dot(sol.y);
  return sol;
}

/// Largest inscribed ball. Rows are normalized by ||A_i|| before solving so
/// the LP reads  max R  s.t.  a_i x + R <= b_i / ||A_i||,  R >= 0.
inline Ball chebyshev_ball(const HPolytope& P) {
  const int d = P.dimension();
  const int m = P.num_facets();
  Vector norms = P.A().rowwise().norm();

  LinearProgram lp;
  lp.G.resize(m, d + 1);
  lp.G.leftCols(d) = norms.cwiseInverse().asDiagonal() * P.A();
  lp.G.col(d).setOnes();
  lp.h = P.b().cwiseQuotient(norms);
  lp.objective = Vector::Zero(d + 1);
  lp.objective[d] = 1.0;
  lp.nonneg.assign(static_cast<std::size_t>(d + 1), false);
  lp.nonneg[static_cast<std::size_t>(d)] = true;

  const LpSolution sol = solve(lp);
  if (sol.status == LpStatus::infeasible) fail_input("empty polytope");
  if (sol.status == LpStatus::unbounded) fail_input("unbounded polytope");

  Point c = sol.y.head(d);
  // Radius certified against the actual slacks at c.
  const double r = std::min(sol.y[d], ((P.b() - P.A() * c).cwiseQuotient(norms)).minCoeff());
  if (!(r > 1e-12)) fail_input("not full-dimensional");
  return Ball(std::move(c), r);
}

/// Solves max s * x_k over P for every coordinate k and sign s. Returns
/// nullopt when some direction is unbounded.
struct BoundingBox {
  Vector lower;
  Vector upper;
};

inline std::optional<BoundingBox> bounding_box(const HPolytope& P) {
  const int d = P.dimension();
  LinearProgram lp;
  lp.G = P.A();
  lp.h = P.b();
  BoundingBox box{Vector(d), Vector(d)};
  for (int k = 0; k < d; ++k) {
    for (double s : {1.0, -1.0}) {
      lp.objective = Vector::Zero(d);
      lp.objective[k] = s;
      const LpSolution sol = solve(lp);
      if (sol.status == LpStatus::infeasible) fail_input("empty polytope");
      if (sol.status == LpStatus::unbounded) return std::nullopt;
      (s > 0 ? box.upper : box.lower)[k] = sol.y[k];
    }
  }
  return box;
}

inline bool check_bounded(const HPolytope& P) { return bounding_box(P).has_value(); }

}  // namespace hvol
