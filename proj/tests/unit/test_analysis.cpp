#include "doctest.h"
#include "oracles.hpp"

#include "sgfem/analysis.hpp"

#include <cmath>
#include <sstream>

using namespace sgfem;

TEST_SUITE("analysis") {

TEST_CASE("experimental orders") {
  CHECK(eoc({2.0664e-2, 4.9825e-3}, {0.25, 0.125})[0] == doctest::Approx(2.0522).epsilon(1e-4));
  CHECK(eoc({1e-2, 2.5e-3}, {0.25, 0.125})[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eoc({7.1119e-2, 3.3425e-2}, {0.25, 0.125})[0] == doctest::Approx(1.0893).epsilon(1e-4));
  const auto geo = eoc({1.0, 0.125, 0.015625}, {0.3, 0.15, 0.075});
  CHECK(geo.size() == 2);
  for (double o : geo) CHECK(std::abs(o - 3.0) <= 1e-12);
  CHECK_THROWS_AS(eoc({0.0, 1.0}, {0.5, 0.25}), NonPositiveError);
  CHECK_THROWS_AS(eoc({1.0, -1.0}, {0.5, 0.25}), NonPositiveError);
  CHECK_THROWS_AS(eoc({1.0, 0.5}, {0.25, 0.5}), ConfigError);
}

TEST_CASE("space-time norms of simple fields") {
  const auto ctx = OcpContext::build(example1(), 8, TimeGrid{1.0, 4});
  const IntegrationCache cache = error_cache(ctx->disc().space_ptr());
  const int dofs = ctx->disc().num_dofs();
  Vector one = Vector::Zero(dofs);
  one.head(ctx->disc().space().num_standard_dofs()).setOnes();
  Trajectory ones{TrajectoryRole::State, std::vector<Vector>(5, one)};
  const SpaceTimeField zero = [](const Point&, double, Side) { return 0.0; };
  CHECK(std::abs(l2_space_time_error(cache, ones, zero, ctx->grid()) - 2.0) <= 1e-12);
  CHECK(l2_space_time_error(cache, ones, ones, ctx->grid()) == 0.0);
  CHECK(std::abs(l2_space_time_error(cache, ones, SpaceTimeField{}, ctx->grid()) - 2.0) <= 1e-12);

  oracle::Lcg rng(3);
  Trajectory y{TrajectoryRole::State, {}};
  for (int n = 0; n <= 4; ++n) {
    Vector v(dofs);
    for (int i = 0; i < dofs; ++i) v[i] = rng.uniform(-1, 1);
    y.steps.push_back(v);
  }
  const double base = l2_space_time_error(cache, y, zero, ctx->grid());
  CHECK(base > 0.0);
  for (double c : {-3.0, 0.5, 7.0}) {
    Trajectory scaled = y;
    for (auto& s : scaled.steps) s *= c;
    CHECK(std::abs(l2_space_time_error(cache, scaled, zero, ctx->grid()) - std::abs(c) * base) <= 1e-12 * base * std::abs(c));
  }
}

TEST_CASE("interface norms") {
  const auto ctx = OcpContext::build(example1(), 64, TimeGrid{1.0, 2});
  const InterfaceField one = [](const Point&, double) { return 1.0; };
  const double err = l2_interface_error(*ctx, ctx->zero_control(), one);
  CHECK(std::abs(err - std::sqrt(M_PI)) <= 2e-3 * std::sqrt(M_PI));

  const auto& exact = ctx->problem().exact->control;
  ControlField sampled = ctx->zero_control();
  const auto& pts = ctx->control_points().points();
  for (int n = 1; n <= ctx->grid().M; ++n) {
    for (int k = 0; k < 2; ++k) {
      for (int q = 0; q < sampled.points(); ++q) sampled.at(n, k, q) = exact(pts[q].x, ctx->grid().gauss_time(n, k));
    }
  }
  CHECK(l2_interface_error(*ctx, sampled, exact) <= 1e-14);
}

TEST_CASE("projected exact state converges at second order") {
  const auto p = example1();
  std::vector<double> err, h;
  for (int n : {8, 16, 32}) {
    const auto ctx = OcpContext::build(p, n, make_time_grid(n, DtRule::H2));
    const auto& d = ctx->disc();
    // The exact state is e^t times a fixed profile.
    const Vector base = elliptic_projection(d.cache(), d.stiffness(), d.beta_minus(), d.beta_plus(), p.exact->state,
                                            p.exact->state_grad, 0.0);
    Trajectory y{TrajectoryRole::State, {}};
    for (int m = 0; m <= ctx->grid().M; ++m) y.steps.push_back(std::exp(ctx->grid().t(m)) * base);
    err.push_back(l2_space_time_error(error_cache(d.space_ptr()), y, p.exact->state, ctx->grid()));
    h.push_back(2.0 / n);
  }
  for (double o : eoc(err, h)) CHECK(o >= 1.9);
}

TEST_CASE("self convergence") {
  const auto p = example3();
  const FixedPointOptions opts;
  const auto ref = run_case(p, 8, TimeGrid{1.0, 8}, opts);
  const auto rows = self_convergence(ref, {ref});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].err_state <= 1e-12);
  CHECK(rows[0].err_adjoint <= 1e-12);
  CHECK(rows[0].err_control <= 1e-12);

  const auto coarse = run_case(p, 4, TimeGrid{1.0, 4}, opts);
  const auto two = self_convergence(ref, {coarse});
  CHECK(two[0].err_state > 0.0);
  CHECK(two[0].N == 4);

  const auto odd = run_case(p, 6, TimeGrid{1.0, 4}, opts);
  CHECK_THROWS_AS(self_convergence(ref, {odd}), IncompatibleMeshes);
  const auto off_time = run_case(p, 4, TimeGrid{1.0, 3}, opts);
  CHECK_THROWS_AS(self_convergence(ref, {off_time}), IncompatibleMeshes);
}

TEST_CASE("CSV rows") {
  CHECK(csv_header() ==
        "example,beta_minus,beta_plus,N,M,err_state,order_state,err_control,order_control,err_adjoint,"
        "order_adjoint,iters,seconds");
  std::vector<ConvergenceRow> rows(2);
  for (int i = 0; i < 2; ++i) {
    rows[i].example = "ex1";
    rows[i].beta_minus = 1.0;
    rows[i].beta_plus = 10.0;
    rows[i].N = 8 << i;
    rows[i].M = 16 << (2 * i);
    rows[i].err_state = i == 0 ? 1e-2 : 2.5e-3;
    rows[i].err_control = i == 0 ? 4e-3 : 1e-3;
    rows[i].err_adjoint = i == 0 ? 2e-3 : 1e-3;
    rows[i].iterations = 7;
    rows[i].seconds = 0.5;
  }
  fill_orders(rows);
  CHECK_FALSE(rows[0].order_state.has_value());
  CHECK(*rows[1].order_state == doctest::Approx(2.0));
  CHECK(*rows[1].order_adjoint == doctest::Approx(1.0));
  CHECK(csv_row(rows[0]) == "ex1,1,10,8,16,1.000000e-02,,4.000000e-03,,2.000000e-03,,7,0.500");
  CHECK(csv_row(rows[1]) == "ex1,1,10,16,64,2.500000e-03,2.0000,1.000000e-03,2.0000,1.000000e-03,1.0000,7,0.500");
  std::ostringstream out;
  write_csv(out, rows);
  CHECK(out.str() == csv_header() + "\n" + csv_row(rows[0]) + "\n" + csv_row(rows[1]) + "\n");
}

}  // TEST_SUITE
