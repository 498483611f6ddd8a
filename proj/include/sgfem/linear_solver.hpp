#pragma once

#include "sgfem/common.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace sgfem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Factorization of a symmetric positive definite sparse matrix, reused
/// across right-hand sides. The matrix is diagonally scaled before an LDL^T
/// factorization; a pivot below 1e-14 (relative to the unit scaled diagonal)
/// is reported as singular.
class SpdSolver {
 public:
  explicit SpdSolver(const SparseMatrix& system);

  /// Relative residual <= 1e-12 or SolverFailure.
  Vector solve(const Vector& rhs) const;

  int size() const { return static_cast<int>(system_.rows()); }
  double min_scaled_pivot() const { return min_pivot_; }

 private:
  SparseMatrix system_;
  Vector scale_;
  SparseMatrix scaled_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  double min_pivot_ = 0.0;
};

/// One-shot solve of an SPD system.
Vector linear_solve(const SparseMatrix& system, const Vector& rhs);

}  // namespace sgfem
