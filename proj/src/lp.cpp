#include "rdl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rdl/error.hpp"

namespace rdl {
namespace {

// Tableau with the objective in the last row and the rhs in the last column.
class Tableau {
 public:
  Tableau(Matrix t, std::vector<Eigen::Index> basis, double tol)
      : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhs_col() const { return t_.cols() - 1; }
  Matrix& data() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Runs simplex over columns [0, n_cols). Returns false when unbounded.
  bool optimize(Eigen::Index n_cols) {
    const Eigen::Index obj = rows();
    for (int guard = 0; guard < 100000; ++guard) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n_cols; ++j) {
        if (t_(obj, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < obj; ++i) {
        const double a = t_(i, enter);
        if (a > tol_) {
          const double ratio = t_(i, rhs_col()) / a;
          if (ratio < best - 1e-14 ||
              (ratio <= best + 1e-14 && leave >= 0 &&
               basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw ConvergenceError("simplex iteration guard reached", 0.0);
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
  double tol_;
};

}  // namespace

LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c, double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m || c.size() != n) throw DimensionError("solve_lp: inconsistent sizes");
  LpResult result;

  // Phase 1: artificials n..n+m-1, cost = sum of artificials.
  Matrix t = Matrix::Zero(m + 1, n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = sign * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b[i];
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    t(m, n + i) = 1.0;
    t.row(m) -= t.row(i);
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
  Tableau tab(std::move(t), std::move(basis), tol);
  tab.optimize(n + m);
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.data()(m, n + m) > 1e-8 * scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive artificials out of the basis; rows where that is impossible are
  // redundant and get dropped.
  std::vector<Eigen::Index> keep_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] >= n) {
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(tab.data()(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
        keep_rows.push_back(i);
      }
    } else {
      keep_rows.push_back(i);
    }
  }

  // Phase 2 on the original columns.
  const auto k = static_cast<Eigen::Index>(keep_rows.size());
  Matrix t2 = Matrix::Zero(k + 1, n + 1);
  std::vector<Eigen::Index> basis2(static_cast<std::size_t>(k));
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index i = keep_rows[static_cast<std::size_t>(r)];
    t2.block(r, 0, 1, n) = tab.data().block(i, 0, 1, n);
    t2(r, n) = tab.data()(i, n + m);
    basis2[static_cast<std::size_t>(r)] = tab.basis()[static_cast<std::size_t>(i)];
  }
  t2.block(k, 0, 1, n) = c.transpose();
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index j = basis2[static_cast<std::size_t>(r)];
    if (t2(k, j) != 0.0) t2.row(k) -= t2(k, j) * t2.row(r);
  }
  Tableau tab2(std::move(t2), std::move(basis2), tol);
  if (!tab2.optimize(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x = Vector::Zero(n);
  for (Eigen::Index r = 0; r < k; ++r) {
    result.x[tab2.basis()[static_cast<std::size_t>(r)]] = std::max(0.0, tab2.data()(r, n));
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace rdl
