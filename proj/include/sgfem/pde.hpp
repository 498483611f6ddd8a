#pragma once

#include "sgfem/assembly.hpp"
#include "sgfem/common.hpp"
#include "sgfem/linear_solver.hpp"
#include "sgfem/space.hpp"

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sgfem {

enum class DtRule { H2, H1 };

DtRule parse_dt_rule(const std::string& text);
std::string to_string(DtRule rule);

/// Uniform partition of [0, T] into M steps.
struct TimeGrid {
  double T = 1.0;
  int M = 1;

  double dt() const { return T / M; }
  double t(int n) const { return n * T / M; }
  /// Gauss node k (0 or 1) of interval I_n = (t_{n-1}, t_n], n = 1..M.
  double gauss_time(int n, int k) const;
};

/// h2: M = ceil(T / h^2), h1: M = ceil(T / h), with h = 2 / N.
TimeGrid make_time_grid(int n, DtRule rule, double T = 1.0);

enum class TrajectoryRole { State, Adjoint };

/// Coefficient vectors at t_0 .. t_M. The state is Y^n on I_n, the adjoint
/// P^{n-1} on I_n.
struct Trajectory {
  TrajectoryRole role = TrajectoryRole::State;
  std::vector<Vector> steps;

  int num_steps() const { return static_cast<int>(steps.size()) - 1; }
  const Vector& operator[](int n) const { return steps[n]; }
  /// Value held on interval I_n, n = 1..M.
  const Vector& on_interval(int n) const { return role == TrajectoryRole::State ? steps[n] : steps[n - 1]; }
};

/// Space, quadrature caches and the constant-coefficient matrices shared by
/// every solve on one (mesh, interface, beta).
class Discretization {
 public:
  Discretization(std::shared_ptr<const SgfemSpace> space, double beta_minus, double beta_plus);

  const SgfemSpace& space() const { return *space_; }
  std::shared_ptr<const SgfemSpace> space_ptr() const { return space_; }
  const IntegrationCache& cache() const { return cache_; }
  const InterfaceCache& interface_cache() const { return interface_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const DofPartition& partition() const { return partition_; }
  double beta_minus() const { return beta_minus_; }
  double beta_plus() const { return beta_plus_; }
  int num_dofs() const { return space_->num_dofs(); }

 private:
  std::shared_ptr<const SgfemSpace> space_;
  double beta_minus_;
  double beta_plus_;
  IntegrationCache cache_;
  InterfaceCache interface_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  DofPartition partition_;
};

/// Factorized M + dt A on the free DOFs.
class StepOperator {
 public:
  StepOperator(std::shared_ptr<const Discretization> disc, double dt);

  double dt() const { return dt_; }
  const Discretization& discretization() const { return *disc_; }
  /// Full M + dt A before constraints.
  const SparseMatrix& system() const { return system_; }
  const SpdSolver& solver() const { return solver_; }

  /// Solves the free rows of (M + dt A) x = rhs with x = pinned on the
  /// constrained DOFs.
  Vector solve(const Vector& rhs, const Vector& pinned) const;
  /// Same with zero constrained values.
  Vector solve(const Vector& rhs) const;

 private:
  std::shared_ptr<const Discretization> disc_;
  double dt_;
  SparseMatrix system_;
  SparseMatrix coupling_;
  SpdSolver solver_;
};

/// (M + dt A) Y^n = M Y^{n-1} + source(n), Y^n = pinned(n) on constrained DOFs.
Trajectory march_forward(const StepOperator& op, const Vector& initial, int steps,
                         const std::function<Vector(int)>& source,
                         const std::function<Vector(int)>& pinned = nullptr);

/// (M + dt A) P^{n-1} = M P^n + source(n) for n = M..1, P^M = 0, homogeneous constraints.
Trajectory march_backward(const StepOperator& op, int steps, const std::function<Vector(int)>& source);

/// Discrete L2(Omega) norm of a coefficient vector.
double l2_norm(const SparseMatrix& mass, const Vector& coeffs);

}  // namespace sgfem
