#pragma once

#include "sgfem/assembly.hpp"
#include "sgfem/common.hpp"
#include "sgfem/pde.hpp"
#include "sgfem/problem.hpp"

#include <memory>
#include <vector>

namespace sgfem {

/// Control values at each interface quadrature point q and each time Gauss
/// node k of every interval I_n.
class ControlField {
 public:
  ControlField() = default;
  ControlField(int intervals, int points, double value = 0.0)
      : intervals_(intervals), points_(points), values_(static_cast<std::size_t>(intervals) * 2 * points, value) {}

  int intervals() const { return intervals_; }
  int points() const { return points_; }
  std::size_t size() const { return values_.size(); }

  /// n = 1..M, k = 0..1, q = 0..Q-1.
  double& at(int n, int k, int q) { return values_[index(n, k, q)]; }
  double at(int n, int k, int q) const { return values_[index(n, k, q)]; }
  /// Time-Gauss average over I_n at point q.
  double interval_mean(int n, int q) const;

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::size_t index(int n, int k, int q) const {
    return (static_cast<std::size_t>(n - 1) * 2 + k) * points_ + q;
  }

  int intervals_ = 0;
  int points_ = 0;
  std::vector<double> values_;
};

/// Everything needed to evaluate the reduced problem on one mesh and time grid.
class OcpContext {
 public:
  OcpContext(ProblemSpec problem, std::shared_ptr<const Discretization> disc, TimeGrid grid);

  /// Uniform N x N mesh, SGFEM space and matrices for `problem`.
  static std::shared_ptr<const OcpContext> build(const ProblemSpec& problem, int n, const TimeGrid& grid);

  const ProblemSpec& problem() const { return problem_; }
  const Discretization& disc() const { return *disc_; }
  std::shared_ptr<const Discretization> disc_ptr() const { return disc_; }
  const TimeGrid& grid() const { return grid_; }
  const StepOperator& stepper() const { return stepper_; }
  const InterfaceCache& control_points() const { return disc_->interface_cache(); }

  /// Y^0 = R_h y0.
  const Vector& initial_state() const { return initial_; }
  /// int_{I_n} (f, w) + <g, w>_Gamma dt.
  Vector data_source(int n) const;
  /// int_{I_n} (y_d, w) dt.
  Vector target_source(int n) const;
  /// int_{I_n} ||y_d||^2 dt.
  double target_energy(int n) const { return target_energy_[n - 1]; }
  /// int_{I_n} <u, w>_Gamma dt.
  Vector control_source(const ControlField& u, int n) const;
  /// Dirichlet values at t_n (zero on enrichment DOFs).
  Vector pinned(int n) const;

  ControlField zero_control() const;
  /// Discrete L2(0,T; L2(Gamma)) inner product and norm.
  double control_inner(const ControlField& a, const ControlField& b) const;
  double control_norm(const ControlField& a) const;

 private:
  Vector data_load_at(int n) const;
  Vector target_load_at(int n) const;

  ProblemSpec problem_;
  std::shared_ptr<const Discretization> disc_;
  TimeGrid grid_;
  StepOperator stepper_;
  Vector initial_;
  // Either one time-independent average, one vector per step, or empty (computed on demand).
  std::vector<Vector> data_loads_;
  std::vector<Vector> target_loads_;
  std::vector<double> target_energy_;
};

Trajectory forward_solve(const OcpContext& ctx, const ControlField& control);
Trajectory adjoint_solve(const OcpContext& ctx, const Trajectory& state);

/// Pointwise projection at every control point and time node.
ControlField project_admissible(const AdmissibleSet& set, const ControlField& raw, const OcpContext& ctx);

double reduced_cost(const OcpContext& ctx, const ControlField& control, const Trajectory& state);

/// alpha u + P^{n-1}|_Gamma on every interval.
ControlField reduced_gradient(const OcpContext& ctx, const ControlField& control, const Trajectory& adjoint);

/// Trace of P^{n-1} at the control points, per interval.
ControlField adjoint_trace(const OcpContext& ctx, const Trajectory& adjoint);

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 200;
  /// u_k = (1 - theta) u_{k-1} + theta P(-p / alpha).
  double damping = 1.0;
};

struct OptimizerReport {
  int iterations = 0;
  std::vector<double> changes;
  double cost = 0.0;
  bool converged = false;
};

struct OptimalSolution {
  ControlField control;
  Trajectory state;
  Trajectory adjoint;
  OptimizerReport report;
};

OptimalSolution fixed_point_solve(const OcpContext& ctx, const ControlField& init, const FixedPointOptions& options = {});

}  // namespace sgfem
