#include "sgfem/pde.hpp"

#include "sgfem/quadrature.hpp"

#include <cmath>

namespace sgfem {

DtRule parse_dt_rule(const std::string& text) {
  if (text == "h2") return DtRule::H2;
  if (text == "h1") return DtRule::H1;
  throw ConfigError("unknown dt rule '" + text + "' (expected h2 or h1)");
}

std::string to_string(DtRule rule) { return rule == DtRule::H2 ? "h2" : "h1"; }

double TimeGrid::gauss_time(int n, int k) const { return t(n - 1) + kTimeGaussFractions[k] * dt(); }

TimeGrid make_time_grid(int n, DtRule rule, double T) {
  if (n < 1) throw ConfigError("mesh size must be positive");
  const double h = 2.0 / n;
  const double step = rule == DtRule::H2 ? h * h : h;
  // Guard against T / step landing a hair above an integer.
  const int m = static_cast<int>(std::ceil(T / step - 1e-9));
  return TimeGrid{T, std::max(m, 1)};
}

Discretization::Discretization(std::shared_ptr<const SgfemSpace> space, double beta_minus, double beta_plus)
    : space_(std::move(space)),
      beta_minus_(beta_minus),
      beta_plus_(beta_plus),
      cache_(space_),
      interface_(space_),
      mass_(assemble_mass(cache_)),
      stiffness_(assemble_stiffness(cache_, beta_minus, beta_plus)),
      partition_(*space_) {}

StepOperator::StepOperator(std::shared_ptr<const Discretization> disc, double dt)
    : disc_(std::move(disc)),
      dt_(dt),
      system_(disc_->mass() + dt * disc_->stiffness()),
      coupling_(disc_->partition().coupling_block(system_)),
      solver_(disc_->partition().free_block(system_)) {}

Vector StepOperator::solve(const Vector& rhs, const Vector& pinned) const {
  const DofPartition& part = disc_->partition();
  Vector x = Vector::Zero(rhs.size());
  const Vector fixed = part.gather_constrained(pinned);
  for (std::size_t i = 0; i < part.constrained_dofs().size(); ++i) x[part.constrained_dofs()[i]] = fixed[i];
  part.scatter_free(solver_.solve(part.gather_free(rhs) - coupling_ * fixed), x);
  return x;
}

Vector StepOperator::solve(const Vector& rhs) const {
  const DofPartition& part = disc_->partition();
  Vector x = Vector::Zero(rhs.size());
  part.scatter_free(solver_.solve(part.gather_free(rhs)), x);
  return x;
}

Trajectory march_forward(const StepOperator& op, const Vector& initial, int steps,
                         const std::function<Vector(int)>& source, const std::function<Vector(int)>& pinned) {
  const SparseMatrix& mass = op.discretization().mass();
  Trajectory traj;
  traj.role = TrajectoryRole::State;
  traj.steps.reserve(steps + 1);
  traj.steps.push_back(initial);
  for (int n = 1; n <= steps; ++n) {
    Vector rhs = mass * traj.steps.back();
    if (source) rhs += source(n);
    traj.steps.push_back(pinned ? op.solve(rhs, pinned(n)) : op.solve(rhs));
  }
  return traj;
}

Trajectory march_backward(const StepOperator& op, int steps, const std::function<Vector(int)>& source) {
  const SparseMatrix& mass = op.discretization().mass();
  const int ndof = op.discretization().num_dofs();
  Trajectory traj;
  traj.role = TrajectoryRole::Adjoint;
  traj.steps.assign(steps + 1, Vector());
  traj.steps[steps] = Vector::Zero(ndof);
  for (int n = steps; n >= 1; --n) {
    Vector rhs = mass * traj.steps[n];
    if (source) rhs += source(n);
    traj.steps[n - 1] = op.solve(rhs);
  }
  return traj;
}

double l2_norm(const SparseMatrix& mass, const Vector& coeffs) {
  return std::sqrt(std::max(0.0, coeffs.dot(mass * coeffs)));
}

}  // namespace sgfem
