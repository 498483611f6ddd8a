#include "doctest.h"

#include "sgfem/config.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace sgfem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(SGFEM_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string drop_last_column(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

std::string config_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in, "run.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sgfem_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config files") {
  std::istringstream in("# table run\nexample = ex2c2\nbeta = 10, 1\nn = 8,16,32\ndt_rule = h1\ntol = 1e-9  # tight\n");
  const RunConfig c = parse_config(in, "run.cfg");
  CHECK(c.example == "ex2c2");
  CHECK(c.beta_minus == 10.0);
  CHECK(c.beta_plus == 1.0);
  CHECK(c.n_list == std::vector<int>{8, 16, 32});
  CHECK(c.dt_rule == DtRule::H1);
  CHECK(c.tol == 1e-9);
  CHECK_NOTHROW(c.validate());

  CHECK(config_error("example = ex1\nbogus line\n").rfind("run.cfg:2:", 0) == 0);
  CHECK(config_error("\n\ncolour = red\n").rfind("run.cfg:3:", 0) == 0);
  CHECK(config_error("tol = fast\n").rfind("run.cfg:1:", 0) == 0);
  CHECK(config_error("beta = 1\n").rfind("run.cfg:1:", 0) == 0);
  CHECK(config_error("dt_rule = h3\n").rfind("run.cfg:1:", 0) == 0);

  RunConfig bad;
  bad.n_list = {16, 8};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.example = "ex9";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("invalid tolerance exits with a configuration error") {
  const Run r = run_cli("solve --example ex1 --n 8 --tol -1");
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(run_cli("solve --example ex5 --n 8").code == 2);
  CHECK(run_cli("solve --config /nonexistent/run.cfg").code == 2);
  CHECK(run_cli("").code == 2);
}

TEST_CASE("circle table rows") {
  const Run r = run_cli("solve --example ex1 --beta 1,10 --n 8,16 --dt-rule h2");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(r.out.substr(0, r.out.find('\n')) == csv_header());
  CHECK(rows[1].size() == 13);
  CHECK(rows[1][6].empty());
  CHECK(rows[1][4] == "16");
  CHECK(rows[2][4] == "64");
  CHECK(std::abs(std::stod(rows[2][6]) - 2.05) <= 0.2);
}

TEST_CASE("first-order time stepping on the cubic example") {
  const Run r = run_cli("solve --example ex2c1 --beta 1,10 --n 8,16 --dt-rule h1");
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2][4] == "8");
  CHECK(std::abs(std::stod(rows[2][6]) - 1.09) <= 0.2);
}

TEST_CASE("repeated runs give identical tables") {
  setenv("SGFEM_THREADS", "1", 1);
  const Run a = run_cli("solve --example ex2c2 --n 4,8");
  const Run b = run_cli("solve --example ex2c2 --n 4,8");
  unsetenv("SGFEM_THREADS");
  REQUIRE(a.code == 0);
  CHECK(drop_last_column(a.out) == drop_last_column(b.out));
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "example = ex1\nn = 4,8\nemit_fields = true\nresolution = 4\noutput = " << (dir / "table.csv").string()
        << "\n";
  }
  const Run r = run_cli("solve --config " + (dir / "run.cfg").string() + " --n 4");
  REQUIRE(r.code == 0);
  std::ifstream table(dir / "table.csv");
  std::stringstream text;
  text << table.rdbuf();
  CHECK(parse_csv(text.str()).size() == 2);
  CHECK(std::filesystem::exists(dir / "table_fields" / "state.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("field dumps") {
  SUBCASE("row counts") {
    const auto dir = scratch("fields");
    const Run r = run_cli("fields --example ex1 --n 8 --resolution 10 --output " + dir.string());
    REQUIRE(r.code == 0);
    std::ifstream state(dir / "state.csv");
    std::stringstream text;
    text << state.rdbuf();
    const auto rows = parse_csv(text.str());
    CHECK(rows.size() == 1 + 11 * 11);
    CHECK(rows[0] == std::vector<std::string>{"x", "y", "computed", "exact", "error"});
    CHECK(std::filesystem::exists(dir / "adjoint.csv"));
    CHECK(std::filesystem::exists(dir / "control.csv"));
    std::filesystem::remove_all(dir);
  }
  SUBCASE("zero data dumps zeros") {
    ProblemSpec p;
    p.id = "zero";
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
    const auto res = run_case(p, 8, TimeGrid{1.0, 4}, {});
    const auto dir = scratch("zero");
    const auto summary = dump_fields(res, 6, dir);
    CHECK(summary.grid_rows == 49);
    CHECK(summary.control_rows > 0);
    for (const auto& file : {summary.state_file, summary.adjoint_file, summary.control_file}) {
      std::ifstream in(file);
      std::stringstream text;
      text << in.rdbuf();
      const auto rows = parse_csv(text.str());
      const std::size_t col = file == summary.control_file ? 3 : 2;
      for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][col]) == 0.0);
    }
    std::filesystem::remove_all(dir);
  }
}

}  // TEST_SUITE
