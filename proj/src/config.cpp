#include "sgfem/config.hpp"

#include "sgfem/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

namespace sgfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid number '" + text + "' for " + key);
  }
  return v;
}

int parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid integer '" + text + "' for " + key);
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("invalid boolean '" + text + "' for " + key);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_int(item, "n"));
  if (out.empty()) throw ConfigError("empty mesh list");
  return out;
}

std::pair<double, double> parse_beta_pair(const std::string& text) {
  const auto items = split(text, ',');
  if (items.size() != 2) throw ConfigError("beta expects two values 'minus,plus', got '" + text + "'");
  return {parse_double(items[0], "beta"), parse_double(items[1], "beta")};
}

void RunConfig::validate() const {
  if (example != "ex1" && example != "ex2c1" && example != "ex2c2" && example != "ex3") {
    throw ConfigError("unknown example '" + example + "' (expected ex1, ex2c1, ex2c2 or ex3)");
  }
  if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) throw ConfigError("beta values must be positive");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (n_list.empty()) throw ConfigError("mesh list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw ConfigError("mesh sizes must be at least 2");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ConfigError("mesh list must be strictly increasing");
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (resolution < 1) throw ConfigError("resolution must be positive");
  if (ref_n < 2) throw ConfigError("ref_n must be at least 2");
  if (ref_m && *ref_m < 1) throw ConfigError("ref_m must be positive");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "example") {
    c.example = trim(value);
  } else if (key == "beta") {
    std::tie(c.beta_minus, c.beta_plus) = parse_beta_pair(value);
  } else if (key == "beta_minus") {
    c.beta_minus = parse_double(value, key);
  } else if (key == "beta_plus") {
    c.beta_plus = parse_double(value, key);
  } else if (key == "alpha") {
    c.alpha = parse_double(value, key);
  } else if (key == "n") {
    c.n_list = parse_int_list(value);
  } else if (key == "dt_rule") {
    c.dt_rule = parse_dt_rule(trim(value));
  } else if (key == "tol") {
    c.tol = parse_double(value, key);
  } else if (key == "max_iter") {
    c.max_iter = parse_int(value, key);
  } else if (key == "damping") {
    c.damping = parse_double(value, key);
  } else if (key == "output") {
    c.output = trim(value);
  } else if (key == "emit_fields") {
    c.emit_fields = parse_bool(value, key);
  } else if (key == "resolution") {
    c.resolution = parse_int(value, key);
  } else if (key == "ref_n") {
    c.ref_n = parse_int(value, key);
  } else if (key == "ref_m") {
    c.ref_m = parse_int(value, key);
  } else if (key == "parallel_rows") {
    c.parallel_rows = parse_bool(value, key);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, const std::string& source, RunConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "missing key");
    try {
      apply_setting(base, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string(), std::move(base));
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config) {
  config.validate();
  const ProblemSpec problem = make_problem(config.example, config.beta_minus, config.beta_plus, config.alpha);
  const FixedPointOptions options = config.fixed_point();
  const int count = static_cast<int>(config.n_list.size());
  std::vector<CaseResult> results(count);
  auto run_row = [&](int i) {
    const int n = config.n_list[i];
    results[i] = run_case(problem, n, make_time_grid(n, config.dt_rule, problem.T), options);
  };
  parallel_for(count, run_row, config.parallel_rows ? thread_count() : 1);

  std::vector<ConvergenceRow> rows;
  if (problem.exact) {
    for (const auto& r : results) rows.push_back(r.row);
    fill_orders(rows);
    return rows;
  }
  const TimeGrid ref_grid =
      config.ref_m ? TimeGrid{problem.T, *config.ref_m} : make_time_grid(config.ref_n, config.dt_rule, problem.T);
  const CaseResult reference = run_case(problem, config.ref_n, ref_grid, options);
  rows = self_convergence(reference, results);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].converged = results[i].row.converged && reference.row.converged;
  return rows;
}

double interface_parameter(const LevelSetInterface& iface, const Point& x) {
  if (iface.kind() == InterfaceKind::Cubic) return x.x();
  if (iface.kind() == InterfaceKind::HalfPlane) {
    const Point n = iface.normal(x);
    return -n.y() * x.x() + n.x() * x.y();
  }
  const double a = std::atan2(x.y(), x.x());
  return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

FieldDumpSummary dump_fields(const CaseResult& result, int resolution, const std::filesystem::path& dir) {
  if (resolution < 1) throw ConfigError("resolution must be positive");
  std::filesystem::create_directories(dir);
  const OcpContext& ctx = *result.ctx;
  const ProblemSpec& problem = ctx.problem();
  const SgfemSpace& space = ctx.disc().space();
  const int m = ctx.grid().M;
  const double t_mid = 0.5 * (ctx.grid().t(m - 1) + ctx.grid().t(m));
  FieldDumpSummary summary;
  summary.state_file = dir / "state.csv";
  summary.adjoint_file = dir / "adjoint.csv";
  summary.control_file = dir / "control.csv";

  auto grid_dump = [&](const std::filesystem::path& path, const Vector& coeffs, const SpaceTimeField& exact) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "x,y,computed,exact,error\n";
    int rows = 0;
    for (int j = 0; j <= resolution; ++j) {
      for (int i = 0; i <= resolution; ++i) {
        const Point x(-1.0 + 2.0 * i / resolution, -1.0 + 2.0 * j / resolution);
        const double v = space.evaluate(coeffs, x);
        out << format(x.x()) << ',' << format(x.y()) << ',' << format(v);
        if (exact) {
          const double e = exact(x, t_mid, point_side(problem.iface, x));
          out << ',' << format(e) << ',' << format(std::abs(e - v));
        } else {
          out << ",,";
        }
        out << '\n';
        ++rows;
      }
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
    return rows;
  };
  const bool has_exact = problem.exact.has_value();
  summary.grid_rows = grid_dump(summary.state_file, result.solution.state.on_interval(m),
                                has_exact ? problem.exact->state : SpaceTimeField{});
  grid_dump(summary.adjoint_file, result.solution.adjoint.on_interval(m),
            has_exact ? problem.exact->adjoint : SpaceTimeField{});

  const auto& pts = ctx.control_points().points();
  std::vector<int> order(pts.size());
  for (std::size_t q = 0; q < pts.size(); ++q) order[q] = static_cast<int>(q);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return interface_parameter(problem.iface, pts[a].x) < interface_parameter(problem.iface, pts[b].x);
  });
  std::ofstream out(summary.control_file);
  if (!out) throw std::runtime_error("cannot write " + summary.control_file.string());
  out << "s,x,y,computed,exact,error\n";
  for (int q : order) {
    const Point& x = pts[q].x;
    const double v = result.solution.control.interval_mean(m, q);
    out << format(interface_parameter(problem.iface, x)) << ',' << format(x.x()) << ',' << format(x.y()) << ','
        << format(v);
    if (has_exact) {
      const double e = problem.exact->control(x, t_mid);
      out << ',' << format(e) << ',' << format(std::abs(e - v));
    } else {
      out << ",,";
    }
    out << '\n';
    ++summary.control_rows;
  }
  if (!out) throw std::runtime_error("failed writing " + summary.control_file.string());
  return summary;
}

}  // namespace sgfem
