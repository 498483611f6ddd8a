#pragma once

#include "sgfem/common.hpp"
#include "sgfem/geometry.hpp"

#include <optional>
#include <string>

namespace sgfem {

/// Pointwise box u_a <= u <= u_b on Gamma x [0, T]. An empty bound function
/// means the side is open.
class AdmissibleSet {
 public:
  /// What to do where u_a > u_b at an evaluated point.
  enum class Crossing {
    Strict,     ///< throw InfeasibleBounds
    LowerWins,  ///< max(u_a, min(u_b, v))
  };

  AdmissibleSet() = default;
  AdmissibleSet(InterfaceField lower, InterfaceField upper, Crossing crossing = Crossing::Strict);

  static AdmissibleSet unbounded() { return {}; }
  static AdmissibleSet box(double lower, double upper);

  bool has_lower() const { return static_cast<bool>(lower_); }
  bool has_upper() const { return static_cast<bool>(upper_); }
  bool is_unbounded() const { return !has_lower() && !has_upper(); }
  Crossing crossing() const { return crossing_; }

  double lower(const Point& x, double t) const;
  double upper(const Point& x, double t) const;

  double project(double v, const Point& x, double t) const;

 private:
  InterfaceField lower_;
  InterfaceField upper_;
  Crossing crossing_ = Crossing::Strict;
};

/// Known optimal triple with the gradients used for projections and checks.
struct ExactSolution {
  SpaceTimeField state;
  SpaceTimeGradient state_grad;
  SpaceTimeField adjoint;
  SpaceTimeGradient adjoint_grad;
  InterfaceField control;
};

struct ProblemSpec {
  std::string id;
  LevelSetInterface iface = LevelSetInterface::circle(0.5);
  double beta_minus = 1.0;
  double beta_plus = 1.0;
  double alpha = 1.0;
  double T = 1.0;
  AdmissibleSet bounds;

  SpaceTimeField f;
  InterfaceField g;
  SpaceTimeField y_desired;
  SpaceTimeField y0;
  SpaceTimeGradient y0_grad;
  /// Dirichlet data; ignored when homogeneous_boundary is set.
  SpaceTimeField boundary;
  bool homogeneous_boundary = false;
  /// f, g and y_d do not depend on t.
  bool time_independent_data = false;

  std::optional<ExactSolution> exact;

  double beta(Side s) const { return s == Side::Minus ? beta_minus : beta_plus; }
};

/// Flux jump (beta- grad y- - beta+ grad y+) . n with n = grad phi / |grad phi|.
double flux_jump(const ProblemSpec& problem, const SpaceTimeGradient& grad, const Point& x, double t);

/// Circle r0 = 0.5, time-dependent crossing bounds, nonhomogeneous boundary data.
ProblemSpec example1(double beta_minus = 1.0, double beta_plus = 10.0);

enum class Example2Case { Unconstrained, Constrained };

/// Cubic interface meeting the outer boundary.
ProblemSpec example2(Example2Case which, double beta_minus = 1.0, double beta_plus = 10.0);

/// Flower interface, no exact solution, homogeneous boundary, no bounds.
ProblemSpec example3(double beta_minus = 1.0, double beta_plus = 10.0);

/// "ex1", "ex2c1", "ex2c2" or "ex3". Throws ConfigError for other ids.
ProblemSpec make_problem(const std::string& id, double beta_minus, double beta_plus, double alpha = 1.0);

}  // namespace sgfem
