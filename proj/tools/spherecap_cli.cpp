// Batch entry point: solve equation instances on spherical caps, verify
// concavity of the results, and run the lemma / ordering / hypothesis suites.
//
// Exit codes: 0 pass, 1 verdict fail, 2 usage or config error, 3 numeric
// failure.

#include "spherecap/io.hpp"
#include "spherecap/jacobi.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>

using nlohmann::json;
using namespace spherecap;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

void emit(const json& j, const std::string& report_path) {
  const std::string text = j.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else {
    atomic_write(report_path, text);
  }
}

int cmd_solve(const std::string& config_path, const std::string& out_path) {
  RunConfig rc = load_config(config_path);
  SolveLog log;
  if (rc.solver.mode == SolverMode::Semilinear2D) {
    GridField u = solve_semilinear(rc.solver, &log);
    write_field_csv(u, out_path);
  } else {
    RadialField u = solve_radial_fully_nonlinear(rc.solver, &log);
    write_radial_csv(u, out_path);
  }
  json j{{"iterations", log.iterations},
         {"final_residual", log.final_residual},
         {"converged", true}};
  atomic_write(out_path + ".log.json", j.dump(2) + "\n");
  return kExitPass;
}

int cmd_verify(const std::string& config_path, const std::string& solution_path,
               const std::string& report_path, long pairs_override) {
  RunConfig rc = load_config(config_path);
  PolarGrid grid{rc.solver.Nr, rc.solver.Ntheta, rc.solver.domain.radius()};
  GridField field = read_field_csv(solution_path, grid);
  GridFieldView view(field, rc.solver.domain);
  if (pairs_override > 0) rc.verify.num_pairs = pairs_override;
  rc.verify.tolerance =
      grid_tolerance(rc.solver.domain, rc.solver.Nr, rc.solver.Ntheta);
  ConcavityReport rep = full_report(view, rc.solver.domain, rc.solver.op,
                                    rc.solver.rhs, rc.verify, &field);
  emit(report_to_json(rep), report_path);
  return rep.verdict ? kExitPass : kExitFail;
}

int cmd_check_lemmas(double speed, double fd_step, std::uint64_t seed,
                     const std::string& report_path) {
  Rng rng(seed);
  // One segment of the requested speed through a seeded random orientation.
  const SpherePoint x(Eigen::Vector3d(std::cos(rng.uniform(0.0, 6.28)),
                                      std::sin(rng.uniform(0.0, 6.28)),
                                      rng.uniform(-0.3, 0.3)));
  const TangentVector dir(
      x, [&] {
        Vec v(3);
        v << rng.normal(), rng.normal(), rng.normal();
        v -= v.dot(x.coords()) * x.coords();
        return (2.0 * speed / v.norm() * v).eval();
      }());
  const SpherePoint y = exp_map(dir);
  const GeodesicSegment seg = geodesic(x, y);

  // v-scalar identities.
  const double v0 = jacobi_scalar_v(speed, 0.0);
  const double v2 = jacobi_scalar_v(speed, 2.0);
  const double v1 = jacobi_scalar_v(speed, 1.0);
  const double v1_expected = 1.0 / (2.0 * std::cos(speed));

  // Closed-form Jacobi fields against the finite-difference oracle.
  const ParallelFrame frame(seg);
  std::vector<double> ts;
  for (int i = 0; i <= 10; ++i) ts.push_back(-1.0 + 0.2 * i);
  double bvp_dev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng sub = rng.substream(trial);
    Vec dl(3), dr(3);
    for (int i = 0; i < 3; ++i) {
      dl(i) = sub.normal();
      dr(i) = sub.normal();
    }
    dl -= dl.dot(seg.x().coords()) * seg.x().coords();
    dr -= dr.dot(seg.y().coords()) * seg.y().coords();
    const TangentVector left(seg.x(), dl);
    const TangentVector zero_r(seg.y(), Vec::Zero(3));
    const JacobiField jf = jacobi_bvp(seg, left, zero_r);
    const auto oracle =
        fd_jacobi_oracle(seg.x(), seg.y(), left, Endpoint::X, 1e-5, ts);
    for (size_t i = 0; i < ts.size(); ++i) {
      bvp_dev = std::max(bvp_dev, (jf.eval(ts[i]) - oracle[i]).norm());
    }
  }

  Vec xi(1);
  xi << 1.0;
  const KIdentityReport kr = check_k_identities(seg, xi, fd_step);

  const bool pass = std::abs(v0) <= 1e-14 && std::abs(v2 - 1.0) <= 1e-12 &&
                    std::abs(v1 - v1_expected) <= 1e-12 && bvp_dev <= 1e-6 &&
                    kr.k1_sup <= 1e-4 && kr.k00_sup <= 1e-4 &&
                    kr.k2_at_zero <= 1e-4 && kr.k3_at_zero <= 1e-4 &&
                    kr.k_boundary_max <= 1e-5 && kr.evk_residual_max <= 1e-4;

  json j{{"speed", speed},
         {"fd_step", fd_step},
         {"seed", seed},
         {"v_at_0", v0},
         {"v_at_2_minus_1", v2 - 1.0},
         {"v_at_1_error", v1 - v1_expected},
         {"bvp_vs_oracle_max_dev", bvp_dev},
         {"k1_sup", kr.k1_sup},
         {"k_tangential_sup", kr.k00_sup},
         {"k2_at_zero", kr.k2_at_zero},
         {"k3_at_zero", kr.k3_at_zero},
         {"k_boundary_max", kr.k_boundary_max},
         {"evk_residual_max", kr.evk_residual_max},
         {"k2_at_half_sample", kr.k2_mid_sample},
         {"verdict", pass ? "PASS" : "FAIL"}};
  emit(j, report_path);
  return pass ? kExitPass : kExitFail;
}

int cmd_check_ordering(int trials, std::uint64_t seed,
                       const std::string& report_path) {
  Rng master(seed);
  double worst_contraction = -1e300;
  double worst_expansion = -1e300;
  long violations = 0;
  for (int k = 0; k < trials; ++k) {
    Rng rng = master.substream(k);
    const int dim = 2 + static_cast<int>(rng.uniform() * 5.0);  // 2..6
    Eigen::MatrixXd A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = rng.normal();
    const SymmetricMatrix W((A.transpose() * A).eval());

    Eigen::MatrixXd S(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j <= i; ++j) S(i, j) = S(j, i) = rng.normal();
    const Spectrum ssp = eigen_sym(SymmetricMatrix(S));
    const double rad = ssp.eigenvalues.cwiseAbs().maxCoeff();
    const double rmin = ssp.eigenvalues.cwiseAbs().minCoeff();
    if (rad <= 1e-12 || rmin <= 1e-12) continue;

    // Contraction: largest |eigenvalue| rescaled to uniform (0,1].
    const SymmetricMatrix Vc(
        ((1e-6 + (1.0 - 1e-6) * rng.uniform()) / rad) * S);
    const OrderingVerdict vc = spectrum_ordering_check(W, Vc, false);
    worst_contraction = std::max(worst_contraction, vc.max_violation);
    if (!vc.ordered) ++violations;

    // Expansion: smallest |eigenvalue| rescaled to uniform [1, 3].
    const SymmetricMatrix Ve((rng.uniform(1.0, 3.0) / rmin) * S);
    const OrderingVerdict ve = spectrum_ordering_check(W, Ve, true);
    worst_expansion = std::max(worst_expansion, ve.max_violation);
    if (!ve.ordered) ++violations;
  }
  const bool pass = violations == 0;
  json j{{"trials", trials},
         {"seed", seed},
         {"violations", violations},
         {"worst_contraction_violation", worst_contraction},
         {"worst_expansion_violation", worst_expansion},
         {"verdict", pass ? "PASS" : "FAIL"}};
  emit(j, report_path);
  return pass ? kExitPass : kExitFail;
}

int cmd_check_hypotheses(const std::string& config_path, int trials,
                         std::uint64_t seed, const std::string& report_path) {
  RunConfig rc = load_config(config_path);
  const HypothesisReport fr = check_f_hypotheses(rc.solver.op, trials, seed);
  const HypothesisReport br =
      check_b_hypotheses(rc.solver.rhs, rc.solver.domain, trials, seed + 1);
  const bool pass = fr.all_pass() && br.all_pass();
  json j{{"f", hypothesis_report_to_json(fr)},
         {"b", hypothesis_report_to_json(br)},
         {"trials", trials},
         {"seed", seed},
         {"verdict", pass ? "PASS" : "FAIL"}};
  emit(j, report_path);
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate elliptic solves and concavity verification on "
               "spherical caps"};
  app.require_subcommand(1);

  std::string config_path, out_path, report_path, solution_path;
  std::uint64_t seed = 1;
  int trials = 10000;
  long pairs = 0;
  double speed = 0.7, fd_step = 1e-3;

  auto* solve = app.add_subcommand("solve", "Solve a configured instance");
  solve->add_option("--config", config_path)->required();
  solve->add_option("--out", out_path)->required();

  auto* verify = app.add_subcommand("verify", "Verify concavity of a solution");
  verify->add_option("--config", config_path)->required();
  verify->add_option("--solution", solution_path)->required();
  verify->add_option("--report", report_path);
  verify->add_option("--pairs", pairs);

  auto* lemmas = app.add_subcommand("check-lemmas",
                                    "Jacobi-field and K-identity residuals");
  lemmas->add_option("--speed", speed);
  lemmas->add_option("--fd-step", fd_step);
  lemmas->add_option("--seed", seed);
  lemmas->add_option("--report", report_path);

  auto* ordering =
      app.add_subcommand("check-ordering", "Contraction spectrum ordering");
  ordering->add_option("--trials", trials);
  ordering->add_option("--seed", seed);
  ordering->add_option("--report", report_path);

  auto* hyp = app.add_subcommand("check-hypotheses",
                                 "Operator and right-hand-side hypotheses");
  hyp->add_option("--config", config_path)->required();
  hyp->add_option("--trials", trials);
  hyp->add_option("--seed", seed);
  hyp->add_option("--report", report_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(config_path, out_path);
    if (verify->parsed())
      return cmd_verify(config_path, solution_path, report_path, pairs);
    if (lemmas->parsed())
      return cmd_check_lemmas(speed, fd_step, seed, report_path);
    if (ordering->parsed())
      return cmd_check_ordering(trials, seed, report_path);
    if (hyp->parsed())
      return cmd_check_hypotheses(config_path, trials, seed, report_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
