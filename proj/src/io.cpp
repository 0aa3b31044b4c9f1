#include "spherecap/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spherecap {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double get_num(const json& j, const std::string& where, const char* key,
               std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing key '" + key + "'");
  }
  if (!j.at(key).is_number()) {
    throw ConfigError(where + ": '" + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

std::string get_str(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw ConfigError(where + ": missing string key '" + key + "'");
  }
  return j.at(key).get<std::string>();
}

ScalarFn parse_psi(const json& j) {
  require_keys(j, "operator.psi", {"name", "p"});
  const std::string name = get_str(j, "operator.psi", "name");
  if (name == "identity") return ScalarFn::identity();
  if (name == "exp") return ScalarFn::exponential();
  if (name == "power") {
    const double p = get_num(j, "operator.psi", "p", 2.0);
    if (p < 1.0) throw ConfigError("operator.psi: power exponent must be >= 1");
    return ScalarFn::power(p);
  }
  throw ConfigError("operator.psi: unknown function '" + name + "'");
}

}  // namespace

RunConfig parse_config(const json& j) {
  require_keys(j, "config",
               {"mode", "operator", "rhs", "domain", "grid", "tol", "max_iter",
                "verification"});

  RunConfig rc;

  const std::string mode = get_str(j, "config", "mode");
  if (mode == "semilinear-2d") {
    rc.solver.mode = SolverMode::Semilinear2D;
  } else if (mode == "radial-fully-nonlinear-1d") {
    rc.solver.mode = SolverMode::RadialFullyNonlinear1D;
  } else {
    throw ConfigError("config: unknown mode '" + mode + "'");
  }

  const json& op = j.at("operator");
  require_keys(op, "operator", {"psi", "phi", "cone"});
  rc.solver.op.psi = parse_psi(op.at("psi"));
  if (op.contains("phi")) {
    require_keys(op.at("phi"), "operator.phi", {"name", "slope"});
    const std::string pn = get_str(op.at("phi"), "operator.phi", "name");
    if (pn == "zero") {
      rc.solver.op.phi_slope = 0.0;
    } else if (pn == "linear") {
      rc.solver.op.phi_slope = get_num(op.at("phi"), "operator.phi", "slope");
    } else {
      throw ConfigError("operator.phi: unknown function '" + pn + "'");
    }
  }
  if (op.contains("cone")) {
    const std::string cn = get_str(op, "operator", "cone");
    if (cn == "all") {
      rc.solver.op.cone = Cone::All;
    } else if (cn == "positive") {
      rc.solver.op.cone = Cone::Positive;
    } else {
      throw ConfigError("operator.cone: unknown cone '" + cn + "'");
    }
  }

  const json& domain = j.at("domain");
  require_keys(domain, "domain", {"R"});
  const double R = get_num(domain, "domain", "R");
  rc.solver.domain = CapDomain(SpherePoint(Eigen::Vector3d(0, 0, 1)), R);

  const json& rhs = j.at("rhs");
  require_keys(rhs, "rhs", {"c", "lambda", "mu"});
  rc.solver.rhs.pole = rc.solver.domain.pole();
  rc.solver.rhs.lambda = get_num(rhs, "rhs", "lambda");
  rc.solver.rhs.mu = get_num(rhs, "rhs", "mu", 0.0);
  const json& c = rhs.at("c");
  require_keys(c, "rhs.c", {"name", "a", "b", "k"});
  const std::string cn = get_str(c, "rhs.c", "name");
  if (cn == "constant") {
    rc.solver.rhs.c_kind = CFormKind::Constant;
    rc.solver.rhs.k = get_num(c, "rhs.c", "k");
  } else if (cn == "cos") {
    rc.solver.rhs.c_kind = CFormKind::CosDist;
    rc.solver.rhs.bcos = get_num(c, "rhs.c", "a");
    rc.solver.rhs.k = get_num(c, "rhs.c", "k", 0.0);
  } else if (cn == "exp_cos") {
    rc.solver.rhs.c_kind = CFormKind::ExpCos;
    rc.solver.rhs.a = get_num(c, "rhs.c", "a");
    rc.solver.rhs.bcos = get_num(c, "rhs.c", "b", 0.0);
    rc.solver.rhs.k = get_num(c, "rhs.c", "k", 0.0);
  } else {
    throw ConfigError("rhs.c: unknown function '" + cn + "'");
  }

  const json& grid = j.at("grid");
  require_keys(grid, "grid", {"Nr", "Ntheta"});
  rc.solver.Nr = static_cast<int>(get_num(grid, "grid", "Nr"));
  rc.solver.Ntheta = static_cast<int>(get_num(grid, "grid", "Ntheta", 64.0));

  rc.solver.tol_residual = get_num(j, "config", "tol", 1e-10);
  if (!(rc.solver.tol_residual > 0.0)) {
    throw ConfigError("config: tol must be > 0");
  }
  rc.solver.max_iter = static_cast<int>(get_num(j, "config", "max_iter", 200.0));

  if (j.contains("verification")) {
    const json& v = j.at("verification");
    require_keys(v, "verification",
                 {"num_pairs", "num_geodesics", "seed", "num_boundary",
                  "num_interior", "hypothesis_trials"});
    rc.verify.num_pairs =
        static_cast<long>(get_num(v, "verification", "num_pairs", 100000.0));
    rc.verify.num_geodesics = static_cast<int>(
        get_num(v, "verification", "num_geodesics", 1000.0));
    rc.verify.seed = static_cast<std::uint64_t>(
        get_num(v, "verification", "seed", 1.0));
    rc.verify.num_boundary = static_cast<int>(
        get_num(v, "verification", "num_boundary", 256.0));
    rc.verify.num_interior = static_cast<int>(
        get_num(v, "verification", "num_interior", 8.0));
    rc.verify.hypothesis_trials = static_cast<int>(
        get_num(v, "verification", "hypothesis_trials", 2000.0));
  }
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << contents;
  }
  std::filesystem::rename(tmp, path);
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_field_csv(const GridField& field, const std::string& path) {
  std::ostringstream os;
  os << "r,theta,u\n";
  os << "0,0," << fmt(field.pole_value) << "\n";
  const PolarGrid& g = field.grid;
  for (int i = 1; i <= g.Nr; ++i)
    for (int j = 0; j < g.Ntheta; ++j)
      os << fmt(i * g.hr()) << "," << fmt(j * g.htheta()) << ","
         << fmt(field.at(i, j)) << "\n";
  atomic_write(path, os.str());
}

void write_radial_csv(const RadialField& field, const std::string& path) {
  std::ostringstream os;
  os << "r,theta,u\n";
  const double h = field.hr();
  for (int i = 0; i < field.values.size(); ++i)
    os << fmt(i * h) << ",0," << fmt(field.values(i)) << "\n";
  atomic_write(path, os.str());
}

GridField read_field_csv(const std::string& path, const PolarGrid& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,theta,u", 0) != 0) {
    throw ConfigError("field file: missing 'r,theta,u' header");
  }
  struct Row {
    double r, theta, u;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row row{};
    std::istringstream ls(line);
    char c1, c2;
    if (!(ls >> row.r >> c1 >> row.theta >> c2 >> row.u) || c1 != ',' ||
        c2 != ',') {
      throw ConfigError("field file: malformed row '" + line + "'");
    }
    rows.push_back(row);
  }
  const long full = 1L + static_cast<long>(grid.Nr) * grid.Ntheta;
  const long radial = grid.Nr + 1L;
  GridField f{grid, 0.0, Eigen::MatrixXd::Zero(grid.Nr, grid.Ntheta)};
  auto check_r = [&](double got, double want) {
    if (std::abs(got - want) > 1e-9) {
      throw ConfigError("field file: node radius does not match the grid");
    }
  };
  if (static_cast<long>(rows.size()) == full) {
    check_r(rows[0].r, 0.0);
    f.pole_value = rows[0].u;
    long k = 1;
    for (int i = 1; i <= grid.Nr; ++i)
      for (int j = 0; j < grid.Ntheta; ++j, ++k) {
        check_r(rows[k].r, i * grid.hr());
        f.rings(i - 1, j) = rows[k].u;
      }
  } else if (static_cast<long>(rows.size()) == radial) {
    // Radial profile: revolve onto the angular grid.
    check_r(rows[0].r, 0.0);
    f.pole_value = rows[0].u;
    for (int i = 1; i <= grid.Nr; ++i) {
      check_r(rows[i].r, i * grid.hr());
      f.rings.row(i - 1).setConstant(rows[i].u);
    }
  } else {
    throw ConfigError("field file: node count does not match the grid");
  }
  return f;
}

nlohmann::json hypothesis_report_to_json(const HypothesisReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"worst_violation", c.worst_violation},
                      {"witness", c.witness}});
  }
  return {{"checks", checks}, {"all_pass", rep.all_pass()}};
}

namespace {
json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}
}  // namespace

nlohmann::json report_to_json(const ConcavityReport& rep) {
  return {{"min_z", rep.min_z},
          {"argmin",
           {{"x", vec_to_json(rep.argmin.x)},
            {"y", vec_to_json(rep.argmin.y)},
            {"z", vec_to_json(rep.argmin.z)}}},
          {"num_pairs", rep.num_pairs},
          {"boundary_margin", rep.boundary_margin_min},
          {"boundary_witness",
           {{"x", vec_to_json(rep.boundary_witness_x)},
            {"y", vec_to_json(rep.boundary_witness_y)}}},
          {"boundary_exclusion", rep.boundary_exclusion},
          {"geodesic_scan_worst", rep.geodesic_scan_worst},
          {"gradient_norm_excess_at_argmin", rep.gradient_norm_excess_at_argmin},
          {"hypotheses",
           {{"f", hypothesis_report_to_json(rep.f_hypotheses)},
            {"b", hypothesis_report_to_json(rep.b_hypotheses)}}},
          {"tolerance", rep.tolerance},
          {"verdict", rep.verdict ? "PASS" : "FAIL"}};
}

}  // namespace spherecap
