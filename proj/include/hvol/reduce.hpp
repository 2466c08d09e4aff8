#pragma once

// Elimination of equality constraints: {x | Aeq x = beq, G x <= h, x >= 0}
// becomes a full-dimensional H-polytope in the free variables of the reduced
// row echelon form of Aeq.

#include "hvol/core.hpp"

#include <optional>
#include <vector>

namespace hvol {

/// x = offset + linear * y, mapping reduced coordinates y back to the
/// original variables.
struct AffineLift {
  Matrix linear;
  Vector offset;

  Vector operator()(const Vector& y) const { return offset + linear * y; }
};

struct ReducedPolytope {
  HPolytope polytope;
  AffineLift lift;
  std::vector<int> free_columns;
  std::vector<int> pivot_columns;
};

struct RowEchelon {
  Matrix R;                 // rank x n, identity on pivot columns
  Vector rhs;               // rank
  std::vector<int> pivots;  // pivot column of each row
};

/// Gauss-Jordan elimination with partial pivoting. Rows whose remaining
/// pivot is below 1e-10 times their original norm are treated as dependent
/// and dropped; a dropped row with non-zero right-hand side means the system
/// is inconsistent.
inline RowEchelon reduced_row_echelon(const Matrix& Aeq, const Vector& beq) {
  if (Aeq.rows() != beq.size()) fail_input("equality system: row count mismatch");
  const Eigen::Index m = Aeq.rows();
  const Eigen::Index n = Aeq.cols();
  Matrix M(m, n + 1);
  M << Aeq, beq;

  Vector row_scale(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    row_scale[i] = Aeq.row(i).norm();
    if (row_scale[i] == 0.0) row_scale[i] = 1.0;
  }

  std::vector<int> pivots;
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < n && rank < m; ++col) {
    Eigen::Index best = -1;
    double best_rel = 0.0;
    for (Eigen::Index i = rank; i < m; ++i) {
      const double rel = std::abs(M(i, col)) / row_scale[i];
      if (rel > best_rel) {
        best_rel = rel;
        best = i;
      }
    }
    if (best < 0 || best_rel <= 1e-10) continue;
    M.row(rank).swap(M.row(best));
    std::swap(row_scale[rank], row_scale[best]);
    M.row(rank) /= M(rank, col);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i != rank && M(i, col) != 0.0) M.row(i) -= M(i, col) * M.row(rank);
    }
    pivots.push_back(static_cast<int>(col));
    ++rank;
  }

  for (Eigen::Index i = rank; i < m; ++i) {
    if (std::abs(M(i, n)) > 1e-9 * std::max(1.0, std::abs(beq.maxCoeff())))
      fail_input("inconsistent system");
  }

  RowEchelon out;
  out.R = M.topLeftCorner(rank, n);
  out.rhs = M.col(n).head(rank);
  out.pivots = std::move(pivots);
  return out;
}

/// Reduces {x | Aeq x = beq, G x <= h, (x >= 0 if nonneg)} to a
/// full-dimensional polytope over the free variables of the RREF.
inline ReducedPolytope reduce_to_full_dimension(const Matrix& Aeq, const Vector& beq, bool nonneg,
                                                const Matrix& G = Matrix(),
                                                const Vector& h = Vector()) {
  const Eigen::Index n = Aeq.cols();
  if (G.size() > 0 && (G.cols() != n || G.rows() != h.size()))
    fail_input("inequality system has the wrong shape");

  RowEchelon rref = reduced_row_echelon(Aeq, beq);
  std::vector<bool> is_pivot(n, false);
  for (int c : rref.pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (Eigen::Index c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(static_cast<int>(c));
  const int k = static_cast<int>(free_cols.size());
  if (k == 0) fail_input("zero-dimensional");

  // Pivot row r reads x_{p_r} + sum_f R(r, f) x_f = rhs_r.
  AffineLift lift{Matrix::Zero(n, k), Vector::Zero(n)};
  for (int j = 0; j < k; ++j) lift.linear(free_cols[j], j) = 1.0;
  for (std::size_t r = 0; r < rref.pivots.size(); ++r) {
    const int p = rref.pivots[r];
    lift.offset[p] = rref.rhs[static_cast<Eigen::Index>(r)];
    for (int j = 0; j < k; ++j)
      lift.linear(p, j) = -rref.R(static_cast<Eigen::Index>(r), free_cols[j]);
  }

  // Rows of the reduced system: -x_i <= 0 lifted, then G x <= h lifted.
  std::vector<Vector> rows;
  std::vector<double> rhs;
  auto push_row = [&](const Eigen::RowVectorXd& a, double bound) {
    Vector lifted = (a * lift.linear).transpose();
    const double off = bound - a.dot(lift.offset);
    if (lifted.lpNorm<Eigen::Infinity>() <= 1e-12) {
      if (off < -1e-9) fail_input("inconsistent system");
      return;  // constant row
    }
    rows.push_back(std::move(lifted));
    rhs.push_back(off);
  };
  if (nonneg) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(n);
      a[i] = -1.0;
      push_row(a, 0.0);
    }
  }
  for (Eigen::Index i = 0; i < G.rows(); ++i) push_row(G.row(i), h[i]);
  if (rows.empty()) fail_input("reduced system has no inequality constraints");

  Matrix A(static_cast<Eigen::Index>(rows.size()), k);
  Vector b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    b[static_cast<Eigen::Index>(i)] = rhs[i];
  }
  return ReducedPolytope{HPolytope(std::move(A), std::move(b)), std::move(lift),
                         std::move(free_cols), std::move(rref.pivots)};
}

}  // namespace hvol
