#include "sgfem/linear_solver.hpp"

#include <cmath>
#include <sstream>

namespace sgfem {

namespace {

constexpr double kPivotTol = 1e-14;
constexpr double kResidualTol = 1e-12;

}  // namespace

SpdSolver::SpdSolver(const SparseMatrix& system) : system_(system) {
  if (system_.rows() != system_.cols()) throw SolverFailure("system matrix is not square");
  const Eigen::Index n = system_.rows();
  scale_.resize(n);
  const Vector diag = system_.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(diag[i] > 0.0) || !std::isfinite(diag[i])) {
      std::ostringstream msg;
      msg << "non-positive diagonal entry " << diag[i] << " at row " << i;
      throw SolverFailure(msg.str());
    }
    scale_[i] = 1.0 / std::sqrt(diag[i]);
  }
  scaled_ = scale_.asDiagonal() * system_ * scale_.asDiagonal();
  ldlt_.compute(scaled_);
  if (ldlt_.info() != Eigen::Success) throw SolverFailure("LDL^T factorization failed");
  min_pivot_ = n > 0 ? ldlt_.vectorD().minCoeff() : 1.0;
  if (!(min_pivot_ > kPivotTol)) {
    std::ostringstream msg;
    msg << "matrix is singular or indefinite (min scaled pivot " << min_pivot_ << ")";
    throw SolverFailure(msg.str());
  }
}

Vector SpdSolver::solve(const Vector& rhs) const {
  if (rhs.size() != system_.rows()) throw SolverFailure("right-hand side size mismatch");
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return Vector::Zero(rhs.size());
  Vector x = scale_.asDiagonal() * ldlt_.solve(Vector(scale_.asDiagonal() * rhs));
  Vector r = rhs - system_ * x;
  double rel = r.norm() / bnorm;
  for (int pass = 0; pass < 2 && rel > kResidualTol; ++pass) {
    x += scale_.asDiagonal() * ldlt_.solve(Vector(scale_.asDiagonal() * r));
    r = rhs - system_ * x;
    rel = r.norm() / bnorm;
  }
  if (!(rel <= kResidualTol)) {
    std::ostringstream msg;
    msg << "relative residual " << rel << " exceeds " << kResidualTol;
    throw SolverFailure(msg.str());
  }
  return x;
}

Vector linear_solve(const SparseMatrix& system, const Vector& rhs) { return SpdSolver(system).solve(rhs); }

}  // namespace sgfem
