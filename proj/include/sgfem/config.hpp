#pragma once

#include "sgfem/analysis.hpp"
#include "sgfem/pde.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sgfem {

struct RunConfig {
  std::string example = "ex1";
  double beta_minus = 1.0;
  double beta_plus = 10.0;
  double alpha = 1.0;
  std::vector<int> n_list = {8, 16, 32, 64};
  DtRule dt_rule = DtRule::H2;
  double tol = 1e-10;
  int max_iter = 200;
  double damping = 1.0;
  std::string output;  ///< empty: standard output
  bool emit_fields = false;
  int resolution = 64;
  int ref_n = 128;
  std::optional<int> ref_m;  ///< default: dt_rule applied to ref_n
  bool parallel_rows = false;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
  FixedPointOptions fixed_point() const { return {tol, max_iter, damping}; }
};

/// Applies one key = value setting. Throws ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads flat key = value lines ('#' starts a comment). Errors carry
/// "<source>:<line>:" prefixes.
RunConfig parse_config(std::istream& in, const std::string& source = "config", RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

std::vector<int> parse_int_list(const std::string& text);
std::pair<double, double> parse_beta_pair(const std::string& text);

/// One row per N (self-convergence rows for problems without an exact solution).
/// Rows run concurrently when parallel_rows is set.
std::vector<ConvergenceRow> run_convergence(const RunConfig& config);

/// State and adjoint on a (P+1)^2 grid and the control along Gamma, at the
/// last interval, with pointwise errors when an exact solution is known.
struct FieldDumpSummary {
  std::filesystem::path state_file;
  std::filesystem::path adjoint_file;
  std::filesystem::path control_file;
  int grid_rows = 0;
  int control_rows = 0;
};

FieldDumpSummary dump_fields(const CaseResult& result, int resolution, const std::filesystem::path& dir);

/// Curve parameter of an interface point: polar angle for closed curves, x1 otherwise.
double interface_parameter(const LevelSetInterface& iface, const Point& x);

}  // namespace sgfem
