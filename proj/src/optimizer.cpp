#include "sgfem/optimizer.hpp"

#include "sgfem/parallel.hpp"
#include "sgfem/quadrature.hpp"

#include <cmath>

namespace sgfem {

namespace {

constexpr double kLoadCacheBytes = 1024.0 * 1024.0 * 1024.0;

struct TargetStep {
  Vector load;
  double energy = 0.0;
};

// (1/|I|) int_I (y_d, w) dt and (1/|I|) int_I ||y_d||^2 dt.
TargetStep target_average(const IntegrationCache& cache, const SpaceTimeField& yd, double t0, double t1) {
  const auto& pts = cache.points();
  Vector values = Vector::Zero(static_cast<Eigen::Index>(pts.size()));
  double energy = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double t = t0 + kTimeGaussFractions[k] * (t1 - t0);
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const double v = yd(pts[q].x, t, pts[q].side);
      values[q] += kTimeGaussWeights[k] * v;
      energy += kTimeGaussWeights[k] * pts[q].weight * v * v;
    }
  }
  return {cache.load_from_values(values), energy};
}

}  // namespace

double ControlField::interval_mean(int n, int q) const {
  return kTimeGaussWeights[0] * at(n, 0, q) + kTimeGaussWeights[1] * at(n, 1, q);
}

OcpContext::OcpContext(ProblemSpec problem, std::shared_ptr<const Discretization> disc, TimeGrid grid)
    : problem_(std::move(problem)), disc_(std::move(disc)), grid_(grid), stepper_(disc_, grid.dt()) {
  const Discretization& d = *disc_;
  initial_ = elliptic_projection(d.cache(), d.stiffness(), d.beta_minus(), d.beta_plus(), problem_.y0,
                                 problem_.y0_grad, 0.0);
  const int m = grid_.M;
  const double dt = grid_.dt();
  target_energy_.assign(m, 0.0);
  if (problem_.time_independent_data) {
    data_loads_.push_back(assemble_volume_load(d.cache(), problem_.f, 0.0, grid_.T) +
                          assemble_interface_load(d.interface_cache(), problem_.g, 0.0, grid_.T));
    TargetStep target = target_average(d.cache(), problem_.y_desired, 0.0, grid_.T);
    target_loads_.push_back(std::move(target.load));
    target_energy_.assign(m, dt * target.energy);
    return;
  }
  const double bytes = 2.0 * m * static_cast<double>(d.num_dofs()) * sizeof(double);
  const bool keep = bytes <= kLoadCacheBytes;
  if (keep) {
    data_loads_.resize(m);
    target_loads_.resize(m);
  }
  parallel_for(m, [&](int i) {
    const int n = i + 1;
    TargetStep target = target_average(d.cache(), problem_.y_desired, grid_.t(n - 1), grid_.t(n));
    target_energy_[i] = dt * target.energy;
    if (keep) {
      data_loads_[i] = data_load_at(n);
      target_loads_[i] = dt * target.load;
    }
  });
}

std::shared_ptr<const OcpContext> OcpContext::build(const ProblemSpec& problem, int n, const TimeGrid& grid) {
  auto mesh = std::make_shared<const TriMesh>(n);
  auto space = build_space(mesh, problem.iface);
  auto disc = std::make_shared<const Discretization>(space, problem.beta_minus, problem.beta_plus);
  return std::make_shared<const OcpContext>(problem, disc, grid);
}

Vector OcpContext::data_load_at(int n) const {
  const double t0 = grid_.t(n - 1);
  const double t1 = grid_.t(n);
  return grid_.dt() * (assemble_volume_load(disc_->cache(), problem_.f, t0, t1) +
                       assemble_interface_load(disc_->interface_cache(), problem_.g, t0, t1));
}

Vector OcpContext::target_load_at(int n) const {
  return grid_.dt() * target_average(disc_->cache(), problem_.y_desired, grid_.t(n - 1), grid_.t(n)).load;
}

Vector OcpContext::data_source(int n) const {
  if (problem_.time_independent_data) return grid_.dt() * data_loads_.front();
  if (!data_loads_.empty()) return data_loads_[n - 1];
  return data_load_at(n);
}

Vector OcpContext::target_source(int n) const {
  if (problem_.time_independent_data) return grid_.dt() * target_loads_.front();
  if (!target_loads_.empty()) return target_loads_[n - 1];
  return target_load_at(n);
}

Vector OcpContext::control_source(const ControlField& u, int n) const {
  const InterfaceCache& ic = control_points();
  Vector mean(static_cast<Eigen::Index>(ic.size()));
  for (int q = 0; q < u.points(); ++q) mean[q] = u.interval_mean(n, q);
  return grid_.dt() * ic.load_from_values(mean);
}

Vector OcpContext::pinned(int n) const {
  const SgfemSpace& space = disc_->space();
  Vector out = Vector::Zero(space.num_dofs());
  if (problem_.homogeneous_boundary) return out;
  const double t = grid_.t(n);
  for (int d : space.constrained_dofs()) {
    if (!space.is_enrichment_dof(d)) out[d] = problem_.boundary(space.mesh().node(d), t, space.node_side(d));
  }
  return out;
}

ControlField OcpContext::zero_control() const {
  return ControlField(grid_.M, static_cast<int>(control_points().size()));
}

double OcpContext::control_inner(const ControlField& a, const ControlField& b) const {
  const Vector& w = control_points().weights();
  double sum = 0.0;
  for (int n = 1; n <= a.intervals(); ++n) {
    for (int k = 0; k < 2; ++k) {
      double s = 0.0;
      for (int q = 0; q < a.points(); ++q) s += w[q] * a.at(n, k, q) * b.at(n, k, q);
      sum += kTimeGaussWeights[k] * s;
    }
  }
  return grid_.dt() * sum;
}

double OcpContext::control_norm(const ControlField& a) const { return std::sqrt(std::max(0.0, control_inner(a, a))); }

Trajectory forward_solve(const OcpContext& ctx, const ControlField& control) {
  auto source = [&](int n) -> Vector { return ctx.data_source(n) + ctx.control_source(control, n); };
  std::function<Vector(int)> pinned;
  if (!ctx.problem().homogeneous_boundary) pinned = [&](int n) { return ctx.pinned(n); };
  return march_forward(ctx.stepper(), ctx.initial_state(), ctx.grid().M, source, pinned);
}

Trajectory adjoint_solve(const OcpContext& ctx, const Trajectory& state) {
  const SparseMatrix& mass = ctx.disc().mass();
  const double dt = ctx.grid().dt();
  auto source = [&](int n) -> Vector { return dt * (mass * state[n]) - ctx.target_source(n); };
  return march_backward(ctx.stepper(), ctx.grid().M, source);
}

ControlField project_admissible(const AdmissibleSet& set, const ControlField& raw, const OcpContext& ctx) {
  ControlField out = raw;
  if (set.is_unbounded()) return out;
  const auto& pts = ctx.control_points().points();
  for (int n = 1; n <= raw.intervals(); ++n) {
    for (int k = 0; k < 2; ++k) {
      const double t = ctx.grid().gauss_time(n, k);
      for (int q = 0; q < raw.points(); ++q) out.at(n, k, q) = set.project(raw.at(n, k, q), pts[q].x, t);
    }
  }
  return out;
}

double reduced_cost(const OcpContext& ctx, const ControlField& control, const Trajectory& state) {
  const SparseMatrix& mass = ctx.disc().mass();
  const double dt = ctx.grid().dt();
  double tracking = 0.0;
  for (int n = 1; n <= ctx.grid().M; ++n) {
    const Vector& y = state[n];
    tracking += dt * y.dot(mass * y) - 2.0 * y.dot(ctx.target_source(n)) + ctx.target_energy(n);
  }
  return 0.5 * tracking + 0.5 * ctx.problem().alpha * ctx.control_inner(control, control);
}

ControlField adjoint_trace(const OcpContext& ctx, const Trajectory& adjoint) {
  ControlField out = ctx.zero_control();
  for (int n = 1; n <= out.intervals(); ++n) {
    const Vector tr = ctx.control_points().trace(adjoint.on_interval(n));
    for (int k = 0; k < 2; ++k) {
      for (int q = 0; q < out.points(); ++q) out.at(n, k, q) = tr[q];
    }
  }
  return out;
}

ControlField reduced_gradient(const OcpContext& ctx, const ControlField& control, const Trajectory& adjoint) {
  ControlField out = adjoint_trace(ctx, adjoint);
  const double alpha = ctx.problem().alpha;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += alpha * control.values()[i];
  return out;
}

OptimalSolution fixed_point_solve(const OcpContext& ctx, const ControlField& init, const FixedPointOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (options.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  const double alpha = ctx.problem().alpha;
  const AdmissibleSet& set = ctx.problem().bounds;

  OptimalSolution sol;
  sol.control = project_admissible(set, init, ctx);
  sol.state = forward_solve(ctx, sol.control);
  sol.adjoint = adjoint_solve(ctx, sol.state);
  for (int k = 1; k <= options.max_iter; ++k) {
    ControlField raw = adjoint_trace(ctx, sol.adjoint);
    for (double& v : raw.values()) v = -v / alpha;
    ControlField next = project_admissible(set, raw, ctx);
    if (options.damping < 1.0) {
      for (std::size_t i = 0; i < next.size(); ++i) {
        next.values()[i] = (1.0 - options.damping) * sol.control.values()[i] + options.damping * next.values()[i];
      }
    }
    ControlField diff = next;
    for (std::size_t i = 0; i < diff.size(); ++i) diff.values()[i] -= sol.control.values()[i];
    const double change = ctx.control_norm(diff) / std::max(ctx.control_norm(next), 1.0);
    sol.control = std::move(next);
    sol.state = forward_solve(ctx, sol.control);
    sol.adjoint = adjoint_solve(ctx, sol.state);
    sol.report.iterations = k;
    sol.report.changes.push_back(change);
    if (change <= options.tol) {
      sol.report.converged = true;
      break;
    }
  }
  sol.report.cost = reduced_cost(ctx, sol.control, sol.state);
  return sol;
}

}  // namespace sgfem
