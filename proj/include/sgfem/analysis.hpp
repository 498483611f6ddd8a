#pragma once

#include "sgfem/assembly.hpp"
#include "sgfem/optimizer.hpp"
#include "sgfem/pde.hpp"
#include "sgfem/problem.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sgfem {

/// Order-4 rule on every element, split along Gamma on cut elements.
IntegrationCache error_cache(std::shared_ptr<const SgfemSpace> space);

/// (sum_n int_{I_n} ||exact(t) - U_n||^2 dt)^{1/2} with U_n the value of the
/// trajectory on I_n and two Gauss nodes per interval. An empty `exact` is 0.
double l2_space_time_error(const IntegrationCache& cache, const Trajectory& traj, const SpaceTimeField& exact,
                           const TimeGrid& grid);

/// Same norm between two trajectories on one space.
double l2_space_time_error(const IntegrationCache& cache, const Trajectory& a, const Trajectory& b,
                           const TimeGrid& grid);

/// Discrete L2(0,T; L2(Gamma)) distance between a control and an exact field.
double l2_interface_error(const OcpContext& ctx, const ControlField& control, const InterfaceField& exact);

/// Pairwise (log E1 - log E2) / (log h1 - log h2).
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h);

struct ConvergenceRow {
  std::string example;
  double beta_minus = 1.0;
  double beta_plus = 1.0;
  int N = 0;
  int M = 0;
  double err_state = 0.0;
  double err_control = 0.0;
  double err_adjoint = 0.0;
  std::optional<double> order_state;
  std::optional<double> order_control;
  std::optional<double> order_adjoint;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

struct CaseResult {
  ConvergenceRow row;
  std::shared_ptr<const OcpContext> ctx;
  OptimalSolution solution;
};

/// Builds the discretization for N, runs the fixed point from zero control
/// and, when an exact solution is known, fills the error columns.
CaseResult run_case(const ProblemSpec& problem, int n, const TimeGrid& grid, const FixedPointOptions& options);

/// Fills the order columns from the second row on (rows sorted by N).
void fill_orders(std::vector<ConvergenceRow>& rows);

/// Errors of each coarse run against a fine reference on nested meshes.
/// Coarse fields are evaluated on the reference quadrature; the coarse
/// control is recovered from its adjoint through the projection formula.
std::vector<ConvergenceRow> self_convergence(const CaseResult& reference, const std::vector<CaseResult>& coarse);

std::string csv_header();
std::string csv_row(const ConvergenceRow& row);
void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

}  // namespace sgfem
