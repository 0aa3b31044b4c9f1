#include "spherecap/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace spherecap;
using nlohmann::json;

namespace {

json base_config() {
  return json{{"mode", "semilinear-2d"},
              {"operator",
               {{"psi", {{"name", "identity"}}},
                {"phi", {{"name", "zero"}}},
                {"cone", "all"}}},
              {"rhs",
               {{"c", {{"name", "cos"}, {"a", 3.0}, {"k", -0.5403}}},
                {"lambda", 1.0},
                {"mu", 0.0}}},
              {"domain", {{"R", 1.0}}},
              {"grid", {{"Nr", 32}, {"Ntheta", 32}}},
              {"tol", 1e-10},
              {"max_iter", 50},
              {"verification", {{"num_pairs", 1000}, {"seed", 7}}}};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("spherecap_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("parse_config accepts the reference config") {
  const RunConfig rc = parse_config(base_config());
  CHECK(rc.solver.mode == SolverMode::Semilinear2D);
  CHECK(rc.solver.op.psi.name == "identity");
  CHECK(rc.solver.op.phi_slope == 0.0);
  CHECK(rc.solver.rhs.c_kind == CFormKind::CosDist);
  CHECK(rc.solver.rhs.bcos == 3.0);
  CHECK(rc.solver.rhs.lambda == 1.0);
  CHECK(rc.solver.domain.radius() == 1.0);
  CHECK(rc.solver.Nr == 32);
  CHECK(rc.verify.num_pairs == 1000);
  CHECK(rc.verify.seed == 7);
  CHECK(rc.verify.num_geodesics == 1000);  // default kept
}

TEST_CASE("parse_config rejects malformed input") {
  SUBCASE("unknown top-level key") {
    json j = base_config();
    j["extra"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("unknown nested key") {
    json j = base_config();
    j["rhs"]["c"]["q"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("unknown mode") {
    json j = base_config();
    j["mode"] = "parabolic";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("unknown psi") {
    json j = base_config();
    j["operator"]["psi"]["name"] = "sin";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("power exponent below 1") {
    json j = base_config();
    j["operator"]["psi"] = {{"name", "power"}, {"p", 0.5}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("missing lambda") {
    json j = base_config();
    j["rhs"].erase("lambda");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("non-numeric tol") {
    json j = base_config();
    j["tol"] = "tight";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }
  SUBCASE("cap radius out of range") {
    json j = base_config();
    j["domain"]["R"] = 2.0;  // >= pi/2
    CHECK_THROWS(parse_config(j));
  }
}

TEST_CASE("load_config") {
  TempDir tmp;
  SUBCASE("round trip through a file") {
    std::ofstream(tmp.file("ok.json")) << base_config().dump(2);
    CHECK(load_config(tmp.file("ok.json")).solver.Nr == 32);
  }
  SUBCASE("invalid JSON") {
    std::ofstream(tmp.file("bad.json")) << "{ not json";
    CHECK_THROWS_AS(load_config(tmp.file("bad.json")), ConfigError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config(tmp.file("absent.json")), ConfigError);
  }
}

TEST_CASE("field CSV round trip") {
  TempDir tmp;
  const PolarGrid g{4, 6, 1.0};
  GridField f{g, 0.25, Eigen::MatrixXd::Zero(4, 6)};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) f.rings(i, j) = 0.01 * i - 0.001 * j;

  write_field_csv(f, tmp.file("f.csv"));
  const GridField back = read_field_csv(tmp.file("f.csv"), g);
  CHECK(back.pole_value == f.pole_value);
  CHECK((back.rings - f.rings).cwiseAbs().maxCoeff() == 0.0);

  SUBCASE("grid mismatch detected") {
    CHECK_THROWS_AS(read_field_csv(tmp.file("f.csv"), PolarGrid{8, 6, 1.0}),
                    ConfigError);
    CHECK_THROWS_AS(read_field_csv(tmp.file("f.csv"), PolarGrid{4, 6, 0.5}),
                    ConfigError);
  }
}

TEST_CASE("radial CSV revolves onto the grid") {
  TempDir tmp;
  RadialField rf;
  rf.R = 1.0;
  rf.values.resize(5);
  rf.values << 1.0, 0.9, 0.7, 0.4, 0.0;
  write_radial_csv(rf, tmp.file("r.csv"));
  const GridField f = read_field_csv(tmp.file("r.csv"), PolarGrid{4, 6, 1.0});
  CHECK(f.pole_value == 1.0);
  for (int j = 0; j < 6; ++j) CHECK(f.at(2, j) == 0.7);
}

TEST_CASE("malformed CSV rejected") {
  TempDir tmp;
  SUBCASE("bad header") {
    std::ofstream(tmp.file("h.csv")) << "x,y,u\n0,0,1\n";
    CHECK_THROWS_AS(read_field_csv(tmp.file("h.csv"), PolarGrid{1, 1, 1.0}),
                    ConfigError);
  }
  SUBCASE("bad row") {
    std::ofstream(tmp.file("b.csv")) << "r,theta,u\n0;0;1\n";
    CHECK_THROWS_AS(read_field_csv(tmp.file("b.csv"), PolarGrid{1, 1, 1.0}),
                    ConfigError);
  }
}

TEST_CASE("atomic_write replaces contents") {
  TempDir tmp;
  atomic_write(tmp.file("a.txt"), "first");
  atomic_write(tmp.file("a.txt"), "second");
  std::ifstream in(tmp.file("a.txt"));
  std::string s;
  std::getline(in, s);
  CHECK(s == "second");
  CHECK_FALSE(std::filesystem::exists(tmp.file("a.txt") + ".tmp"));
}

TEST_CASE("report JSON") {
  ConcavityReport rep;
  rep.min_z = 1e-5;
  rep.argmin.x = Eigen::Vector3d(0, 0, 1);
  rep.argmin.y = Eigen::Vector3d(0, 1, 0);
  rep.argmin.z = Eigen::Vector3d(1, 0, 0);
  rep.boundary_witness_x = Eigen::Vector3d(0, 0, 1);
  rep.boundary_witness_y = Eigen::Vector3d(0, 0, 1);
  rep.verdict = true;
  rep.f_hypotheses.checks.push_back({"monotone", true, 0.0, ""});
  const json j = report_to_json(rep);
  CHECK(j.at("verdict") == "PASS");
  CHECK(j.at("min_z") == 1e-5);
  CHECK(j.at("argmin").at("x").size() == 3);
  CHECK(j.at("hypotheses").at("f").at("all_pass") == true);
}
