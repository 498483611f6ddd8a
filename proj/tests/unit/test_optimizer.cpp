#include "doctest.h"
#include "oracles.hpp"

#include "sgfem/optimizer.hpp"
#include "sgfem/problem.hpp"

#include <cmath>

using namespace sgfem;

namespace {

ControlField random_control(const OcpContext& ctx, oracle::Lcg& rng, double lo = -1.0, double hi = 1.0) {
  ControlField u = ctx.zero_control();
  for (double& v : u.values()) v = rng.uniform(lo, hi);
  return u;
}

ControlField combine(const ControlField& a, double s, const ControlField& b) {
  ControlField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += s * b.values()[i];
  return out;
}

double cost_of(const OcpContext& ctx, const ControlField& u) { return reduced_cost(ctx, u, forward_solve(ctx, u)); }

ProblemSpec quiet_problem() {
  ProblemSpec p;
  p.id = "quiet";
  p.beta_minus = 1.0;
  p.beta_plus = 10.0;
  auto zero = [](const Point&, double, Side) { return 0.0; };
  p.f = zero;
  p.g = [](const Point&, double) { return 0.0; };
  p.y_desired = zero;
  p.y0 = zero;
  p.y0_grad = [](const Point&, double, Side) -> Point { return Point::Zero(); };
  p.boundary = zero;
  p.homogeneous_boundary = true;
  return p;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("box projection clamps pointwise") {
  const auto box = AdmissibleSet::box(-1.0, 1.0);
  CHECK(box.project(-2.0, Point::Zero(), 0.0) == -1.0);
  CHECK(box.project(0.3, Point::Zero(), 0.0) == 0.3);
  CHECK(box.project(7.0, Point::Zero(), 0.0) == 1.0);
  CHECK(AdmissibleSet::unbounded().project(-5.0, Point::Zero(), 0.0) == -5.0);
}

TEST_CASE("variable bounds of the circle example") {
  const auto p = example1();
  const Point x(0.5, 0.0);
  CHECK(std::abs(p.bounds.lower(x, 1.0)) <= 1e-15);
  CHECK(p.bounds.upper(x, 1.0) == doctest::Approx(0.25));
  CHECK(std::abs(p.bounds.project(-0.5, x, 1.0)) <= 1e-15);
  CHECK(std::abs(p.exact->control(x, 1.0)) <= 1e-15);
}

TEST_CASE("crossing bounds are rejected under the strict policy") {
  const AdmissibleSet set([](const Point&, double) { return 1.0; }, [](const Point&, double) { return 0.0; });
  CHECK_THROWS_AS(set.project(0.5, Point::Zero(), 0.0), InfeasibleBounds);
  const AdmissibleSet lenient([](const Point&, double) { return 1.0; }, [](const Point&, double) { return 0.0; },
                              AdmissibleSet::Crossing::LowerWins);
  CHECK(lenient.project(0.5, Point::Zero(), 0.0) == 1.0);
}

TEST_CASE("projection is idempotent and nonexpansive") {
  const auto p = example2(Example2Case::Constrained);
  const auto ctx = OcpContext::build(p, 8, make_time_grid(8, DtRule::H1));
  oracle::Lcg rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const ControlField a = random_control(*ctx, rng, -3.0, 3.0);
    const ControlField b = random_control(*ctx, rng, -3.0, 3.0);
    const ControlField pa = project_admissible(p.bounds, a, *ctx);
    const ControlField pb = project_admissible(p.bounds, b, *ctx);
    CHECK(project_admissible(p.bounds, pa, *ctx).values() == pa.values());
    const double lhs = ctx->control_norm(combine(pa, -1.0, pb));
    const double rhs = ctx->control_norm(combine(a, -1.0, b));
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("tracking cost of simple trajectories") {
  const auto ctx = OcpContext::build(quiet_problem(), 8, TimeGrid{1.0, 4});
  const int dofs = ctx->disc().num_dofs();
  Trajectory y;
  y.steps.assign(5, Vector::Zero(dofs));
  CHECK(reduced_cost(*ctx, ctx->zero_control(), y) == 0.0);
  Vector one = Vector::Zero(dofs);
  one.head(ctx->disc().space().num_standard_dofs()).setOnes();
  y.steps.assign(5, one);
  // 1/2 * int_0^1 int_Omega 1 = 2.
  CHECK(std::abs(reduced_cost(*ctx, ctx->zero_control(), y) - 2.0) <= 1e-12);
}

TEST_CASE("reduced gradient agrees with central differences") {
  const auto p = example2(Example2Case::Unconstrained);
  const auto ctx = OcpContext::build(p, 8, TimeGrid{1.0, 8});
  oracle::Lcg rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const ControlField u = random_control(*ctx, rng);
    const ControlField du = random_control(*ctx, rng);
    const ControlField grad = reduced_gradient(*ctx, u, adjoint_solve(*ctx, forward_solve(*ctx, u)));
    const double eps = 1e-4;
    const double fd = (cost_of(*ctx, combine(u, eps, du)) - cost_of(*ctx, combine(u, -eps, du))) / (2.0 * eps);
    const double an = ctx->control_inner(grad, du);
    CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("the constrained optimum satisfies the variational inequality") {
  const auto p = example2(Example2Case::Constrained);
  const auto ctx = OcpContext::build(p, 8, make_time_grid(8, DtRule::H1));
  FixedPointOptions opts;
  opts.tol = 1e-13;
  const auto sol = fixed_point_solve(*ctx, ctx->zero_control(), opts);
  REQUIRE(sol.report.converged);
  const ControlField grad = reduced_gradient(*ctx, sol.control, sol.adjoint);
  oracle::Lcg rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const ControlField v = project_admissible(p.bounds, random_control(*ctx, rng, -2.0, 2.0), *ctx);
    CHECK(ctx->control_inner(grad, combine(v, -1.0, sol.control)) >= -1e-9);
  }
}

TEST_CASE("the unconstrained optimum has a vanishing gradient") {
  const auto ctx = OcpContext::build(example2(Example2Case::Unconstrained), 8, make_time_grid(8, DtRule::H1));
  const auto sol = fixed_point_solve(*ctx, ctx->zero_control());
  REQUIRE(sol.report.converged);
  CHECK(ctx->control_norm(reduced_gradient(*ctx, sol.control, sol.adjoint)) <= 1e-6);
  CHECK(sol.report.iterations == static_cast<int>(sol.report.changes.size()));
}

TEST_CASE("a fixed point start stops after one sweep") {
  const auto ctx = OcpContext::build(quiet_problem(), 8, TimeGrid{1.0, 4});
  const auto sol = fixed_point_solve(*ctx, ctx->zero_control());
  CHECK(sol.report.converged);
  CHECK(sol.report.iterations == 1);
  CHECK(sol.report.changes.at(0) == 0.0);
  CHECK(sol.report.cost == 0.0);
}

TEST_CASE("iteration budget exhaustion is reported") {
  const auto ctx = OcpContext::build(example2(Example2Case::Unconstrained), 8, TimeGrid{1.0, 4});
  FixedPointOptions opts;
  opts.max_iter = 1;
  opts.tol = 1e-14;
  const auto sol = fixed_point_solve(*ctx, ctx->zero_control(), opts);
  CHECK_FALSE(sol.report.converged);
  CHECK(sol.report.iterations == 1);
}

TEST_CASE("invalid iteration options") {
  const auto ctx = OcpContext::build(quiet_problem(), 4, TimeGrid{1.0, 2});
  FixedPointOptions bad;
  bad.tol = -1.0;
  CHECK_THROWS_AS(fixed_point_solve(*ctx, ctx->zero_control(), bad), ConfigError);
  bad = {};
  bad.max_iter = 0;
  CHECK_THROWS_AS(fixed_point_solve(*ctx, ctx->zero_control(), bad), ConfigError);
  bad = {};
  bad.damping = 1.5;
  CHECK_THROWS_AS(fixed_point_solve(*ctx, ctx->zero_control(), bad), ConfigError);
}

}  // TEST_SUITE
