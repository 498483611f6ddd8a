// Target error magnitudes and error-distribution claims. Registered but
// disabled in ctest; run with `sgfem_tests -ts=reference --no-skip`.

#include "doctest.h"

#include "sgfem/analysis.hpp"
#include "sgfem/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sgfem;

namespace {

bool within_factor(double got, double target, double factor) { return got <= factor * target && got >= target / factor; }

CaseResult solve_case(const ProblemSpec& p, int n) { return run_case(p, n, make_time_grid(n, DtRule::H2), {}); }

}  // namespace

TEST_SUITE("reference" * doctest::skip()) {

TEST_CASE("circle example magnitudes") {
  const auto p = example1();
  const auto r8 = solve_case(p, 8);
  MESSAGE("N=8 state " << r8.row.err_state << ", adjoint " << r8.row.err_adjoint);
  CHECK(within_factor(r8.row.err_state, 2.0664e-2, 3.0));
  CHECK(within_factor(r8.row.err_adjoint, 3.2776e-3, 3.0));
  const auto r16 = solve_case(p, 16);
  MESSAGE("N=16 control " << r16.row.err_control);
  CHECK(r16.row.converged);
  CHECK(within_factor(r16.row.err_control, 2.1094e-4, 3.0));
}

TEST_CASE("constrained cubic example control magnitude") {
  const auto r = solve_case(example2(Example2Case::Constrained), 16);
  MESSAGE("N=16 control " << r.row.err_control);
  CHECK(within_factor(r.row.err_control, 4.5507e-4, 3.0));
}

TEST_CASE("flower example adjoint magnitude") {
  const auto p = example3();
  const auto ref = run_case(p, 128, TimeGrid{1.0, 4096}, {});
  const auto coarse = solve_case(p, 16);
  const auto rows = self_convergence(ref, {coarse});
  MESSAGE("N=16 adjoint " << rows[0].err_adjoint);
  CHECK(within_factor(rows[0].err_adjoint, 1.0195e-2, 3.0));
}

TEST_CASE("state errors concentrate in the cut elements") {
  for (auto betas : {std::pair{1.0, 1000.0}, std::pair{1.0, 10.0}}) {
    const auto p = example1(betas.first, betas.second);
    const int n = 16;
    const auto res = solve_case(p, n);
    const auto dir = std::filesystem::temp_directory_path() / "sgfem_reference_band";
    std::filesystem::remove_all(dir);
    dump_fields(res, 64, dir);
    std::ifstream in(dir / "state.csv");
    std::string line;
    std::getline(in, line);
    const SgfemSpace& space = res.ctx->disc().space();
    double near = 0.0, far = 0.0;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string cell;
      double v[5];
      for (double& c : v) {
        std::getline(ls, cell, ',');
        c = std::stod(cell);
      }
      double& slot = space.tag(locate_point(space.mesh(), Point(v[0], v[1])).element) == ElementTag::Cut ? near : far;
      slot = std::max(slot, v[4]);
    }
    MESSAGE("beta = (" << betas.first << ", " << betas.second << "): near " << near << ", far " << far);
    CHECK(near >= far);
    std::filesystem::remove_all(dir);
  }
}

}  // TEST_SUITE
