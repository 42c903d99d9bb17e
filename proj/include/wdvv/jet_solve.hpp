#ifndef WDVV_JET_SOLVE_HPP
#define WDVV_JET_SOLVE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "wdvv/jet.hpp"

namespace wdvv {

/// Dense row-major matrix of jets sharing one layout.
template <typename Scalar>
class JetMatrix {
 public:
  JetMatrix(int rows, int cols, int num_vars, int order)
      : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols, Jet<Scalar>(num_vars, order)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Jet<Scalar>& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Jet<Scalar>& operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> constant_terms() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).value();
    return m;
  }

 private:
  int rows_;
  int cols_;
  std::vector<Jet<Scalar>> entries_;
};

/// Solves A x = b with jet entries by Gaussian elimination, pivoting on the
/// modulus of the constant term. A jet is invertible iff its constant term is,
/// so the system is solvable iff the constant-term matrix is nonsingular.
template <typename Scalar>
std::vector<Jet<Scalar>> jet_linear_solve(JetMatrix<Scalar> A, std::vector<Jet<Scalar>> b) {
  const int n = A.rows();
  if (A.cols() != n) throw DimensionError("jet_linear_solve: matrix is not square");
  if (static_cast<int>(b.size()) != n) throw DimensionError("jet_linear_solve: rhs size mismatch");

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, static_cast<double>(std::abs(A(i, j).value())));
  const double tiny = 1e-14 * scale * n;

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(A(col, col).value());
    for (int i = col + 1; i < n; ++i) {
      const double m = std::abs(A(i, col).value());
      if (m > best) {
        best = m;
        pivot = i;
      }
    }
    if (!(best > tiny)) {
      throw SingularSystemError("jet_linear_solve: constant-term matrix is singular (column " +
                                std::to_string(col) + ")");
    }
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(A(col, j), A(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    const Jet<Scalar> inv = reciprocal(A(col, col));
    for (int i = col + 1; i < n; ++i) {
      const Jet<Scalar> factor = A(i, col) * inv;
      for (int j = col; j < n; ++j) A(i, j) -= factor * A(col, j);
      b[i] -= factor * b[col];
    }
  }

  std::vector<Jet<Scalar>> x(b);
  for (int i = n - 1; i >= 0; --i) {
    Jet<Scalar> acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= A(i, j) * x[j];
    x[i] = acc / A(i, i);
  }
  return x;
}

}  // namespace wdvv

#endif  // WDVV_JET_SOLVE_HPP
