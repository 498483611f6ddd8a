#include "sgfem/analysis.hpp"

#include "sgfem/parallel.hpp"
#include "sgfem/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sgfem {

namespace {

using Triplet = Eigen::Triplet<double>;

double weighted_sq(const IntegrationCache& cache, const Vector& diff) {
  double s = 0.0;
  for (std::size_t q = 0; q < cache.size(); ++q) s += cache.points()[q].weight * diff[q] * diff[q];
  return s;
}

// Rows: points of `cache` (a finer space); columns: DOFs of `coarse`.
SparseMatrix transfer_matrix(const IntegrationCache& cache, const SgfemSpace& coarse) {
  std::vector<Triplet> entries;
  entries.reserve(cache.size() * 4);
  for (std::size_t q = 0; q < cache.size(); ++q) {
    const IntegrationPoint& p = cache.points()[q];
    const PointLocation loc = locate_point(coarse.mesh(), p.x);
    const BasisEval b = coarse.eval_basis_physical(loc.element, p.x, p.side);
    for (int k = 0; k < b.count; ++k) entries.emplace_back(static_cast<int>(q), b.dofs[k], b.values[k]);
  }
  SparseMatrix t(static_cast<Eigen::Index>(cache.size()), coarse.num_dofs());
  t.setFromTriplets(entries.begin(), entries.end());
  return t;
}

SparseMatrix interface_transfer(const InterfaceCache& cache, const SgfemSpace& coarse) {
  std::vector<Triplet> entries;
  for (std::size_t q = 0; q < cache.size(); ++q) {
    const Point& x = cache.points()[q].x;
    const PointLocation loc = locate_point(coarse.mesh(), x);
    const BasisEval b = coarse.eval_basis_physical(loc.element, x);
    for (int k = 0; k < b.count; ++k) entries.emplace_back(static_cast<int>(q), b.dofs[k], b.values[k]);
  }
  SparseMatrix t(static_cast<Eigen::Index>(cache.size()), coarse.num_dofs());
  t.setFromTriplets(entries.begin(), entries.end());
  return t;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string format_order(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

}  // namespace

IntegrationCache error_cache(std::shared_ptr<const SgfemSpace> space) {
  return IntegrationCache(std::move(space), AssemblyOrders{4, 4});
}

double l2_space_time_error(const IntegrationCache& cache, const Trajectory& traj, const SpaceTimeField& exact,
                           const TimeGrid& grid) {
  const int m = grid.M;
  std::vector<double> per_step(m, 0.0);
  parallel_for(m, [&](int i) {
    const int n = i + 1;
    const Vector discrete = cache.evaluate(traj.on_interval(n));
    double s = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double t = grid.gauss_time(n, k);
      double sk = 0.0;
      for (std::size_t q = 0; q < cache.size(); ++q) {
        const IntegrationPoint& p = cache.points()[q];
        const double e = (exact ? exact(p.x, t, p.side) : 0.0) - discrete[q];
        sk += p.weight * e * e;
      }
      s += kTimeGaussWeights[k] * sk;
    }
    per_step[i] = grid.dt() * s;
  });
  double total = 0.0;
  for (double v : per_step) total += v;
  return std::sqrt(total);
}

double l2_space_time_error(const IntegrationCache& cache, const Trajectory& a, const Trajectory& b,
                           const TimeGrid& grid) {
  double total = 0.0;
  for (int n = 1; n <= grid.M; ++n) {
    total += grid.dt() * weighted_sq(cache, cache.evaluate(a.on_interval(n) - b.on_interval(n)));
  }
  return std::sqrt(total);
}

double l2_interface_error(const OcpContext& ctx, const ControlField& control, const InterfaceField& exact) {
  ControlField diff = control;
  const auto& pts = ctx.control_points().points();
  for (int n = 1; n <= control.intervals(); ++n) {
    for (int k = 0; k < 2; ++k) {
      const double t = ctx.grid().gauss_time(n, k);
      for (int q = 0; q < control.points(); ++q) {
        diff.at(n, k, q) = (exact ? exact(pts[q].x, t) : 0.0) - control.at(n, k, q);
      }
    }
  }
  return ctx.control_norm(diff);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size()) throw ConfigError("error and mesh-size lists differ in length");
  for (double e : errors) {
    if (!(e > 0.0)) throw NonPositiveError("convergence order needs positive errors");
  }
  std::vector<double> out;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (!(h[i] < h[i - 1]) || !(h[i] > 0.0)) throw ConfigError("mesh sizes must be positive and strictly decreasing");
    out.push_back((std::log(errors[i - 1]) - std::log(errors[i])) / (std::log(h[i - 1]) - std::log(h[i])));
  }
  return out;
}

CaseResult run_case(const ProblemSpec& problem, int n, const TimeGrid& grid, const FixedPointOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CaseResult res;
  res.ctx = OcpContext::build(problem, n, grid);
  res.solution = fixed_point_solve(*res.ctx, res.ctx->zero_control(), options);
  ConvergenceRow& row = res.row;
  row.example = problem.id;
  row.beta_minus = problem.beta_minus;
  row.beta_plus = problem.beta_plus;
  row.N = n;
  row.M = grid.M;
  row.iterations = res.solution.report.iterations;
  row.converged = res.solution.report.converged;
  if (problem.exact) {
    const IntegrationCache cache = error_cache(res.ctx->disc().space_ptr());
    row.err_state = l2_space_time_error(cache, res.solution.state, problem.exact->state, grid);
    row.err_adjoint = l2_space_time_error(cache, res.solution.adjoint, problem.exact->adjoint, grid);
    row.err_control = l2_interface_error(*res.ctx, res.solution.control, problem.exact->control);
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

void fill_orders(std::vector<ConvergenceRow>& rows) {
  auto order = [](double e0, double e1, int n0, int n1) -> std::optional<double> {
    if (!(e0 > 0.0) || !(e1 > 0.0)) return std::nullopt;
    return eoc({e0, e1}, {2.0 / n0, 2.0 / n1}).front();
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ConvergenceRow& r = rows[i];
    if (i == 0) {
      r.order_state = r.order_control = r.order_adjoint = std::nullopt;
      continue;
    }
    const ConvergenceRow& p = rows[i - 1];
    r.order_state = order(p.err_state, r.err_state, p.N, r.N);
    r.order_control = order(p.err_control, r.err_control, p.N, r.N);
    r.order_adjoint = order(p.err_adjoint, r.err_adjoint, p.N, r.N);
  }
}

std::vector<ConvergenceRow> self_convergence(const CaseResult& reference, const std::vector<CaseResult>& coarse) {
  const OcpContext& fine = *reference.ctx;
  const int nf = fine.disc().space().mesh().grid_count();
  const int mf = fine.grid().M;
  struct Job {
    SparseMatrix volume;
    SparseMatrix iface;
    int ratio = 1;
    double state = 0.0;
    double adjoint = 0.0;
    double control = 0.0;
  };
  const IntegrationCache cache = error_cache(fine.disc().space_ptr());
  const InterfaceCache& fine_iface = fine.control_points();
  std::vector<Job> jobs(coarse.size());
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    const OcpContext& c = *coarse[j].ctx;
    const int nc = c.disc().space().mesh().grid_count();
    const int mc = c.grid().M;
    if (nf % nc != 0 || mf % mc != 0 || std::abs(c.grid().T - fine.grid().T) > 1e-14) {
      throw IncompatibleMeshes("coarse run (N=" + std::to_string(nc) + ", M=" + std::to_string(mc) +
                               ") is not nested in the reference (N=" + std::to_string(nf) +
                               ", M=" + std::to_string(mf) + ")");
    }
    jobs[j].volume = transfer_matrix(cache, c.disc().space());
    jobs[j].iface = interface_transfer(fine_iface, c.disc().space());
    jobs[j].ratio = mf / mc;
  }
  const Vector& w = fine_iface.weights();
  const double dt = fine.grid().dt();
  for (int m = 1; m <= mf; ++m) {
    const Vector ref_state = cache.evaluate(reference.solution.state.on_interval(m));
    const Vector ref_adjoint = cache.evaluate(reference.solution.adjoint.on_interval(m));
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      Job& job = jobs[j];
      const CaseResult& c = coarse[j];
      const int n = (m + job.ratio - 1) / job.ratio;
      job.state += dt * weighted_sq(cache, ref_state - job.volume * c.solution.state.on_interval(n));
      job.adjoint += dt * weighted_sq(cache, ref_adjoint - job.volume * c.solution.adjoint.on_interval(n));
      const Vector trace = job.iface * c.solution.adjoint.on_interval(n);
      const double alpha = c.ctx->problem().alpha;
      for (int k = 0; k < 2; ++k) {
        const double t = fine.grid().gauss_time(m, k);
        double s = 0.0;
        for (int q = 0; q < static_cast<int>(fine_iface.size()); ++q) {
          const double uc = c.ctx->problem().bounds.project(-trace[q] / alpha, fine_iface.points()[q].x, t);
          const double e = reference.solution.control.at(m, k, q) - uc;
          s += w[q] * e * e;
        }
        job.control += dt * kTimeGaussWeights[k] * s;
      }
    }
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    ConvergenceRow row = coarse[j].row;
    row.err_state = std::sqrt(jobs[j].state);
    row.err_adjoint = std::sqrt(jobs[j].adjoint);
    row.err_control = std::sqrt(jobs[j].control);
    rows.push_back(row);
  }
  fill_orders(rows);
  return rows;
}

std::string csv_header() {
  return "example,beta_minus,beta_plus,N,M,err_state,order_state,err_control,order_control,err_adjoint,"
         "order_adjoint,iters,seconds";
}

std::string csv_row(const ConvergenceRow& r) {
  char betas[64];
  std::snprintf(betas, sizeof betas, "%g,%g", r.beta_minus, r.beta_plus);
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
  return r.example + "," + betas + "," + std::to_string(r.N) + "," + std::to_string(r.M) + "," +
         format_value(r.err_state) + "," + format_order(r.order_state) + "," + format_value(r.err_control) + "," +
         format_order(r.order_control) + "," + format_value(r.err_adjoint) + "," + format_order(r.order_adjoint) +
         "," + std::to_string(r.iterations) + "," + secs;
}

void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

}  // namespace sgfem
