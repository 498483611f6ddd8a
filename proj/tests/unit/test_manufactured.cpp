#include "doctest.h"
#include "oracles.hpp"

#include "sgfem/optimizer.hpp"
#include "sgfem/problem.hpp"

#include <cmath>
#include <vector>

using namespace sgfem;

namespace {

std::vector<Point> circle_points(int count) {
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    const double th = 2.0 * M_PI * (i + 0.37) / count;
    out.emplace_back(0.5 * std::cos(th), 0.5 * std::sin(th));
  }
  return out;
}

std::vector<Point> cubic_points(int count) {
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) {
    const double s = -0.45 + 1.5 * (i + 0.5) / count;
    const double y = 3.0 * s * s * s - 3.3 * s * s + 0.72 * s + 0.38;
    if (std::abs(y) < 1.0) out.emplace_back(s, y);
  }
  return out;
}

// Random points at least `gap` away from the interface in level-set units.
std::vector<Point> bulk_points(const ProblemSpec& p, int count, unsigned seed, double gap) {
  oracle::Lcg rng(seed);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    const Point x(rng.uniform(-0.95, 0.95), rng.uniform(-0.95, 0.95));
    if (std::abs(p.iface.phi(x)) < gap || x.norm() < 0.1) continue;
    out.push_back(x);
  }
  return out;
}

void check_pde_residuals(const ProblemSpec& p) {
  const auto& ex = *p.exact;
  for (const Point& x : bulk_points(p, 60, 4, 0.05)) {
    const Side s = point_side(p.iface, x);
    const double beta = s == Side::Minus ? p.beta_minus : p.beta_plus;
    for (double t : {0.2, 0.7}) {
      const double yt = oracle::derivative_fd([&](double tt) { return ex.state(x, tt, s); }, t);
      const double lap_y = oracle::laplacian_fd([&](const oracle::P2& z) { return ex.state(z, t, s); }, x, 2e-4);
      const double f = p.f(x, t, s);
      CHECK(std::abs(yt - beta * lap_y - f) <= 1e-6 * std::max(1.0, std::abs(f)));

      const double pt = oracle::derivative_fd([&](double tt) { return ex.adjoint(x, tt, s); }, t);
      const double lap_p = oracle::laplacian_fd([&](const oracle::P2& z) { return ex.adjoint(z, t, s); }, x, 2e-4);
      const double rhs = ex.state(x, t, s) - p.y_desired(x, t, s);
      CHECK(std::abs(-pt - beta * lap_p - rhs) <= 1e-5 * std::max(1.0, std::abs(rhs)));

      for (int dir = 0; dir < 2; ++dir) {
        const double fd = oracle::gradient_fd([&](const oracle::P2& z) { return ex.state(z, t, s); }, x, dir);
        CHECK(std::abs(ex.state_grad(x, t, s)[dir] - fd) <= 1e-7 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

void check_interface_conditions(const ProblemSpec& p, const std::vector<Point>& gamma) {
  const auto& ex = *p.exact;
  for (const Point& x : gamma) {
    for (double t : {0.0, 0.3, 0.8, 1.0}) {
      CHECK(std::abs(ex.state(x, t, Side::Minus) - ex.state(x, t, Side::Plus)) <= 1e-12);
      CHECK(std::abs(ex.adjoint(x, t, Side::Minus) - ex.adjoint(x, t, Side::Plus)) <= 1e-12);
      CHECK(std::abs(flux_jump(p, ex.adjoint_grad, x, t)) <= 1e-12);
      CHECK(std::abs(p.g(x, t) + ex.control(x, t) - flux_jump(p, ex.state_grad, x, t)) <= 1e-8);
      const double projected = p.bounds.project(-ex.adjoint(x, t, Side::Minus) / p.alpha, x, t);
      CHECK(std::abs(ex.control(x, t) - projected) <= 1e-8);
    }
  }
}

void check_outer_boundary(const ProblemSpec& p) {
  const auto& ex = *p.exact;
  for (int i = 0; i <= 20; ++i) {
    const double s = -1.0 + 0.1 * i;
    for (const Point& x : {Point(s, -1.0), Point(s, 1.0), Point(-1.0, s), Point(1.0, s)}) {
      const Side side = point_side(p.iface, x);
      CHECK(std::abs(ex.adjoint(x, 0.4, side)) <= 1e-14);
      CHECK(std::abs(p.boundary(x, 0.4, side) - ex.state(x, 0.4, side)) <= 1e-14);
    }
  }
}

void check_terminal_adjoint(const ProblemSpec& p) {
  for (const Point& x : bulk_points(p, 20, 9, 0.0)) {
    CHECK(std::abs(p.exact->adjoint(x, 1.0, point_side(p.iface, x))) <= 1e-12);
  }
}

}  // namespace

TEST_SUITE("manufactured") {

TEST_CASE("circle example") {
  const auto p = example1();
  SUBCASE("continuity at (0.5, 0)") {
    const Point x(0.5, 0.0);
    CHECK(std::abs(p.exact->state(x, 0.3, Side::Minus) - p.exact->state(x, 0.3, Side::Plus)) <= 1e-12);
  }
  SUBCASE("interface conditions") { check_interface_conditions(p, circle_points(100)); }
  SUBCASE("bulk equations") { check_pde_residuals(p); }
  SUBCASE("outer boundary") { check_outer_boundary(p); }
  SUBCASE("terminal adjoint") { check_terminal_adjoint(p); }
  SUBCASE("other coefficients") {
    const auto q = example1(1.0, 1000.0);
    check_interface_conditions(q, circle_points(40));
    check_pde_residuals(q);
  }
}

TEST_CASE("cubic examples") {
  for (auto which : {Example2Case::Unconstrained, Example2Case::Constrained}) {
    const auto p = example2(which);
    check_interface_conditions(p, cubic_points(100));
    check_pde_residuals(p);
    check_outer_boundary(p);
    check_terminal_adjoint(p);
  }
}

TEST_CASE("flower example data") {
  const auto p = example3();
  CHECK_FALSE(p.exact.has_value());
  CHECK(p.y_desired(Point(0.0, 0.0), 0.5, point_side(p.iface, Point(0.0, 0.0))) == 10.0);
  CHECK(p.y_desired(Point(0.9, 0.9), 0.5, point_side(p.iface, Point(0.9, 0.9))) == 1.0);
  CHECK(p.f(Point(0.9, 0.9), 0.5, Side::Plus) == 1.0);
  CHECK(p.homogeneous_boundary);
  const auto ctx = OcpContext::build(p, 8, TimeGrid{1.0, 4});
  CHECK(ctx->initial_state().norm() == 0.0);
}

TEST_CASE("problem lookup") {
  CHECK(make_problem("ex2c2", 1.0, 10.0, 0.5).alpha == 0.5);
  CHECK(make_problem("ex3", 1.0, 10.0).id == "ex3");
  CHECK_THROWS_AS(make_problem("ex4", 1.0, 10.0), ConfigError);
  CHECK_THROWS_AS(make_problem("ex1", 0.0, 10.0), ConfigError);
  CHECK_THROWS_AS(make_problem("ex1", 1.0, 10.0, -1.0), ConfigError);
}

}  // TEST_SUITE
