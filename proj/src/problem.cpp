#include "sgfem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sgfem {

AdmissibleSet::AdmissibleSet(InterfaceField lower, InterfaceField upper, Crossing crossing)
    : lower_(std::move(lower)), upper_(std::move(upper)), crossing_(crossing) {}

AdmissibleSet AdmissibleSet::box(double lower, double upper) {
  if (lower > upper) throw InfeasibleBounds("lower bound exceeds upper bound");
  return AdmissibleSet([lower](const Point&, double) { return lower; },
                       [upper](const Point&, double) { return upper; });
}

double AdmissibleSet::lower(const Point& x, double t) const {
  return lower_ ? lower_(x, t) : -std::numeric_limits<double>::infinity();
}

double AdmissibleSet::upper(const Point& x, double t) const {
  return upper_ ? upper_(x, t) : std::numeric_limits<double>::infinity();
}

double AdmissibleSet::project(double v, const Point& x, double t) const {
  const double lo = lower(x, t);
  const double hi = upper(x, t);
  if (lo > hi && crossing_ == Crossing::Strict) {
    std::ostringstream msg;
    msg << "u_a = " << lo << " > u_b = " << hi << " at (" << x.x() << ", " << x.y() << "), t = " << t;
    throw InfeasibleBounds(msg.str());
  }
  return std::max(lo, std::min(hi, v));
}

double flux_jump(const ProblemSpec& problem, const SpaceTimeGradient& grad, const Point& x, double t) {
  const Point n = problem.iface.normal(x);
  return (problem.beta_minus * grad(x, t, Side::Minus) - problem.beta_plus * grad(x, t, Side::Plus)).dot(n);
}

ProblemSpec example1(double beta_minus, double beta_plus) {
  constexpr double r0 = 0.5;
  constexpr double pi = std::numbers::pi;
  ProblemSpec p;
  p.id = "ex1";
  p.iface = LevelSetInterface::circle(r0);
  p.beta_minus = beta_minus;
  p.beta_plus = beta_plus;
  const double bm = beta_minus;
  const double bp = beta_plus;

  auto state = [=](const Point& x, double t, Side s) {
    const double r2 = x.squaredNorm();
    const double r3 = r2 * std::sqrt(r2);
    if (s == Side::Minus) return std::exp(t) * (r3 / bm + (r2 / (r0 * r0) - 1.0) / (4.0 * bm));
    return std::exp(t) * (r3 / bp + (1.0 / bm - 1.0 / bp) * r0 * r0 * r0);
  };
  auto state_grad = [=](const Point& x, double t, Side s) -> Point {
    const double r = x.norm();
    if (s == Side::Minus) return std::exp(t) * (3.0 * r + 1.0 / (2.0 * r0 * r0)) / bm * x;
    return std::exp(t) * 3.0 * r / bp * x;
  };
  // Q = (r^2 - r0^2)(x1^2 - 1)(x2^2 - 1)
  auto q = [=](const Point& x) {
    return (x.squaredNorm() - r0 * r0) * (x.x() * x.x() - 1.0) * (x.y() * x.y() - 1.0);
  };
  auto q_grad = [=](const Point& x) -> Point {
    const double s = x.squaredNorm() - r0 * r0;
    const double a = x.x() * x.x() - 1.0;
    const double b = x.y() * x.y() - 1.0;
    return {2.0 * x.x() * b * (a + s), 2.0 * x.y() * a * (b + s)};
  };
  auto q_lap = [=](const Point& x) {
    const double s = x.squaredNorm() - r0 * r0;
    const double a = x.x() * x.x() - 1.0;
    const double b = x.y() * x.y() - 1.0;
    return 2.0 * b * (a + s) + 8.0 * x.x() * x.x() * b + 2.0 * a * (b + s) + 8.0 * x.y() * x.y() * a;
  };
  auto adjoint = [=](const Point& x, double t, Side s) { return (t - 1.0) * q(x) / (s == Side::Minus ? bm : bp); };
  auto adjoint_grad = [=](const Point& x, double t, Side s) -> Point {
    return (t - 1.0) * q_grad(x) / (s == Side::Minus ? bm : bp);
  };
  auto lower = [](const Point& x, double t) { return t * (std::sin(pi * x.x()) - std::cos(pi * x.y())); };
  auto upper = [](const Point& x, double t) { return t * (x.x() * x.x() + x.y()); };
  auto control = [=](const Point& x, double t) { return std::max(lower(x, t), std::min(upper(x, t), 0.0)); };

  p.bounds = AdmissibleSet(lower, upper, AdmissibleSet::Crossing::LowerWins);
  p.f = [=](const Point& x, double t, Side s) {
    const double r = x.norm();
    const double beta_lap = s == Side::Minus ? std::exp(t) * (9.0 * r + 1.0 / (r0 * r0)) : std::exp(t) * 9.0 * r;
    return state(x, t, s) - beta_lap;
  };
  p.g = [=](const Point& x, double t) { return std::exp(t) * x.norm() / (2.0 * r0 * r0) - control(x, t); };
  p.y_desired = [=](const Point& x, double t, Side s) {
    const double beta = s == Side::Minus ? bm : bp;
    return state(x, t, s) + q(x) / beta + (t - 1.0) * q_lap(x);
  };
  p.y0 = state;
  p.y0_grad = state_grad;
  p.boundary = state;
  p.exact = ExactSolution{state, state_grad, adjoint, adjoint_grad, control};
  return p;
}

ProblemSpec example2(Example2Case which, double beta_minus, double beta_plus) {
  ProblemSpec p;
  p.id = which == Example2Case::Unconstrained ? "ex2c1" : "ex2c2";
  p.iface = LevelSetInterface::cubic();
  p.beta_minus = beta_minus;
  p.beta_plus = beta_plus;
  const double bm = beta_minus;
  const double bp = beta_plus;

  auto level = [](const Point& x) {
    const double x1 = x.x();
    return x.y() - 3.0 * x1 * x1 * x1 + 3.3 * x1 * x1 - 0.72 * x1 - 0.38;
  };
  auto poly = [](const Point& x, Side s) {
    const double x1 = x.x();
    const double x2 = x.y();
    if (s == Side::Minus) return -3.0 * x1 * x1 * x1 + x2 * x2 - 0.38;
    return -x2 + x2 * x2 - 3.3 * x1 * x1 + 0.72 * x1;
  };
  auto poly_grad = [](const Point& x, Side s) -> Point {
    if (s == Side::Minus) return {-9.0 * x.x() * x.x(), 2.0 * x.y()};
    return {-6.6 * x.x() + 0.72, -1.0 + 2.0 * x.y()};
  };
  auto poly_lap = [](const Point& x, Side s) { return s == Side::Minus ? -18.0 * x.x() + 2.0 : -4.6; };

  auto state = [=](const Point& x, double t, Side s) { return std::cos(t - 1.0) * poly(x, s); };
  auto state_grad = [=](const Point& x, double t, Side s) -> Point { return std::cos(t - 1.0) * poly_grad(x, s); };
  // Q = phi (x1^2 - 1)(x2^2 - 1)
  auto q = [=](const Point& x) { return level(x) * (x.x() * x.x() - 1.0) * (x.y() * x.y() - 1.0); };
  auto q_grad = [=](const Point& x) -> Point {
    const double x1 = x.x();
    const double x2 = x.y();
    const double phi = level(x);
    const double phix = -9.0 * x1 * x1 + 6.6 * x1 - 0.72;
    const double a = x1 * x1 - 1.0;
    const double b = x2 * x2 - 1.0;
    return {phix * a * b + 2.0 * x1 * phi * b, a * b + 2.0 * x2 * phi * a};
  };
  auto q_lap = [=](const Point& x) {
    const double x1 = x.x();
    const double x2 = x.y();
    const double phi = level(x);
    const double phix = -9.0 * x1 * x1 + 6.6 * x1 - 0.72;
    const double phixx = -18.0 * x1 + 6.6;
    const double a = x1 * x1 - 1.0;
    const double b = x2 * x2 - 1.0;
    return phixx * a * b + 4.0 * x1 * phix * b + 2.0 * phi * b + 4.0 * x2 * a + 2.0 * phi * a;
  };
  auto adjoint = [=](const Point& x, double t, Side s) {
    return std::sin(t - 1.0) * q(x) / (s == Side::Minus ? bm : bp);
  };
  auto adjoint_grad = [=](const Point& x, double t, Side s) -> Point {
    return std::sin(t - 1.0) * q_grad(x) / (s == Side::Minus ? bm : bp);
  };

  InterfaceField control;
  if (which == Example2Case::Unconstrained) {
    control = [](const Point&, double) { return 0.0; };
    p.bounds = AdmissibleSet::unbounded();
  } else {
    auto lower = [](const Point& x, double t) {
      const double x1 = x.x();
      return t * (x.y() - 3.0 * x1 * x1 * x1 + 0.3 * x1 * x1);
    };
    control = [=](const Point& x, double t) { return std::max(lower(x, t), 0.0); };
    p.bounds = AdmissibleSet(lower, [](const Point&, double) { return 1.0; });
  }

  p.f = [=](const Point& x, double t, Side s) {
    const double beta = s == Side::Minus ? bm : bp;
    return -std::sin(t - 1.0) * poly(x, s) - beta * std::cos(t - 1.0) * poly_lap(x, s);
  };
  p.y_desired = [=](const Point& x, double t, Side s) {
    const double beta = s == Side::Minus ? bm : bp;
    return state(x, t, s) + std::cos(t - 1.0) * q(x) / beta + std::sin(t - 1.0) * q_lap(x);
  };
  p.y0 = state;
  p.y0_grad = state_grad;
  p.boundary = state;
  p.exact = ExactSolution{state, state_grad, adjoint, adjoint_grad, control};
  const LevelSetInterface iface = p.iface;
  p.g = [=](const Point& x, double t) {
    const Point n = iface.normal(x);
    const double jump = (bm * state_grad(x, t, Side::Minus) - bp * state_grad(x, t, Side::Plus)).dot(n);
    return jump - control(x, t);
  };
  return p;
}

ProblemSpec example3(double beta_minus, double beta_plus) {
  ProblemSpec p;
  p.id = "ex3";
  p.iface = LevelSetInterface::flower();
  p.beta_minus = beta_minus;
  p.beta_plus = beta_plus;
  p.bounds = AdmissibleSet::unbounded();
  p.f = [](const Point&, double, Side) { return 1.0; };
  p.g = [](const Point&, double) { return 0.0; };
  p.y_desired = [](const Point&, double, Side s) { return s == Side::Minus ? 10.0 : 1.0; };
  p.y0 = [](const Point&, double, Side) { return 0.0; };
  p.y0_grad = [](const Point&, double, Side) -> Point { return Point::Zero(); };
  p.boundary = [](const Point&, double, Side) { return 0.0; };
  p.homogeneous_boundary = true;
  p.time_independent_data = true;
  return p;
}

ProblemSpec make_problem(const std::string& id, double beta_minus, double beta_plus, double alpha) {
  if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) throw ConfigError("beta values must be positive");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  ProblemSpec p;
  if (id == "ex1") {
    p = example1(beta_minus, beta_plus);
  } else if (id == "ex2c1") {
    p = example2(Example2Case::Unconstrained, beta_minus, beta_plus);
  } else if (id == "ex2c2") {
    p = example2(Example2Case::Constrained, beta_minus, beta_plus);
  } else if (id == "ex3") {
    p = example3(beta_minus, beta_plus);
  } else {
    throw ConfigError("unknown example '" + id + "' (expected ex1, ex2c1, ex2c2 or ex3)");
  }
  p.alpha = alpha;
  return p;
}

}  // namespace sgfem
