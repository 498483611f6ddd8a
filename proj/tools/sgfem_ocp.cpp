// Experiment driver: convergence tables (solve) and field snapshots (fields).

#include "sgfem/config.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kNotConverged = 1, kConfigError = 2, kNumericalError = 3 };

struct Flags {
  std::string config;
  std::string example;
  std::string beta;
  double alpha = 0.0;
  std::string n;
  std::string dt_rule;
  double tol = 0.0;
  int max_iter = 0;
  double damping = 0.0;
  std::string output;
  int ref_n = 0;
  int ref_m = 0;
  int resolution = 0;
  bool parallel_rows = false;
  bool emit_fields = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value configuration file (flags override it)");
  cmd->add_option("--example", f.example, "ex1, ex2c1, ex2c2 or ex3");
  cmd->add_option("--beta", f.beta, "beta_minus,beta_plus");
  cmd->add_option("--alpha", f.alpha, "regularization weight");
  cmd->add_option("--dt-rule", f.dt_rule, "h2 (dt = h^2) or h1 (dt = h)");
  cmd->add_option("--tol", f.tol, "fixed-point tolerance");
  cmd->add_option("--max-iter", f.max_iter, "fixed-point iteration limit");
  cmd->add_option("--damping", f.damping, "fixed-point damping in (0, 1]");
  cmd->add_option("--output", f.output, "output file (solve) or directory (fields)");
}

sgfem::RunConfig resolve(const CLI::App* cmd, const Flags& f) {
  sgfem::RunConfig c;
  if (!f.config.empty()) c = sgfem::load_config(f.config);
  auto given = [&](const char* name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--example")) c.example = f.example;
  if (given("--beta")) std::tie(c.beta_minus, c.beta_plus) = sgfem::parse_beta_pair(f.beta);
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--n")) c.n_list = sgfem::parse_int_list(f.n);
  if (given("--dt-rule")) c.dt_rule = sgfem::parse_dt_rule(f.dt_rule);
  if (given("--tol")) c.tol = f.tol;
  if (given("--max-iter")) c.max_iter = f.max_iter;
  if (given("--damping")) c.damping = f.damping;
  if (given("--output")) c.output = f.output;
  if (given("--ref-n")) c.ref_n = f.ref_n;
  if (given("--ref-m")) c.ref_m = f.ref_m;
  if (given("--resolution")) c.resolution = f.resolution;
  if (given("--parallel-rows")) c.parallel_rows = f.parallel_rows;
  if (given("--emit-fields")) c.emit_fields = f.emit_fields;
  c.validate();
  return c;
}

int run_fields(const sgfem::RunConfig& c, const std::string& dir) {
  const int n = c.n_list.back();
  const sgfem::ProblemSpec problem = sgfem::make_problem(c.example, c.beta_minus, c.beta_plus, c.alpha);
  const auto result = sgfem::run_case(problem, n, sgfem::make_time_grid(n, c.dt_rule, problem.T), c.fixed_point());
  const auto summary = sgfem::dump_fields(result, c.resolution, dir);
  std::cerr << "wrote " << summary.state_file.string() << ", " << summary.adjoint_file.string() << ", "
            << summary.control_file.string() << " (" << summary.grid_rows << " grid rows, "
            << summary.control_rows << " interface rows)\n";
  return result.row.converged ? kOk : kNotConverged;
}

int run_solve(const sgfem::RunConfig& c) {
  const auto rows = sgfem::run_convergence(c);
  if (c.output.empty()) {
    sgfem::write_csv(std::cout, rows);
  } else {
    std::ofstream out(c.output);
    if (!out) throw std::runtime_error("cannot write " + c.output);
    sgfem::write_csv(out, rows);
  }
  bool all = true;
  for (const auto& r : rows) {
    if (!r.converged) {
      std::cerr << "N=" << r.N << ": fixed point did not converge in " << r.iterations << " iterations\n";
      all = false;
    }
  }
  if (c.emit_fields) {
    const std::string dir =
        c.output.empty() ? "fields" : std::filesystem::path(c.output).replace_extension().string() + "_fields";
    all = run_fields(c, dir) == kOk && all;
  }
  return all ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SGFEM interface optimal control experiments"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "convergence table as CSV");
  add_common(solve, f);
  solve->add_option("--n", f.n, "comma-separated mesh sizes N");
  solve->add_option("--ref-n", f.ref_n, "reference mesh for problems without exact solution");
  solve->add_option("--ref-m", f.ref_m, "reference step count");
  solve->add_flag("--parallel-rows", f.parallel_rows, "run mesh sizes concurrently");
  solve->add_flag("--emit-fields", f.emit_fields, "also dump fields for the finest mesh");

  auto* fields = app.add_subcommand("fields", "state, adjoint and control snapshots");
  add_common(fields, f);
  fields->add_option("--n", f.n, "mesh size N (last entry of a list is used)");
  fields->add_option("--resolution", f.resolution, "plot grid subdivisions P");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (solve->parsed()) return run_solve(resolve(solve, f));
    const sgfem::RunConfig c = resolve(fields, f);
    return run_fields(c, c.output.empty() ? "fields" : c.output);
  } catch (const sgfem::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
