// Python bindings for the main operations: geometry primitives, Jacobi
// fields, the solvers, and the concavity verifier.

#include "spherecap/io.hpp"
#include "spherecap/jacobi.hpp"
#include "spherecap/solver.hpp"
#include "spherecap/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace spherecap;

namespace {

SpherePoint to_point(const Eigen::VectorXd& v) { return SpherePoint(v); }

ManufacturedCase manufactured(double R) {
  return manufactured_case(
      CapDomain(SpherePoint(Eigen::Vector3d(0, 0, 1)), R));
}

}  // namespace

PYBIND11_MODULE(_spherecap, m) {
  m.doc() = "Degenerate elliptic solves and concavity checks on spherical caps";

  m.def("distance", [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return distance(to_point(x), to_point(y));
  });
  m.def("midpoint", [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return midpoint(to_point(x), to_point(y)).coords();
  });
  m.def("geodesic_point",
        [](const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t) {
          return eval_geodesic(geodesic(to_point(x), to_point(y)), t).coords();
        });
  m.def("jacobi_scalar_v", &jacobi_scalar_v);

  m.def("check_k_identities",
        [](const Eigen::VectorXd& x, const Eigen::VectorXd& y, double step) {
          Vec xi(1);
          xi << 1.0;
          const KIdentityReport r =
              check_k_identities(geodesic(to_point(x), to_point(y)), xi, step);
          py::dict d;
          d["speed"] = r.speed;
          d["k1_sup"] = r.k1_sup;
          d["k2_at_zero"] = r.k2_at_zero;
          d["k3_at_zero"] = r.k3_at_zero;
          d["k_boundary_max"] = r.k_boundary_max;
          d["k00_sup"] = r.k00_sup;
          d["evk_residual_max"] = r.evk_residual_max;
          return d;
        },
        py::arg("x"), py::arg("y"), py::arg("step") = 1e-3);

  m.def("solve_semilinear_manufactured",
        [](double R, int n) {
          SolverConfig cfg;
          cfg.domain = CapDomain(SpherePoint(Eigen::Vector3d(0, 0, 1)), R);
          cfg.rhs = manufactured(R).rhs;
          cfg.Nr = n;
          cfg.Ntheta = n;
          SolveLog log;
          const GridField u = solve_semilinear(cfg, &log);
          py::dict d;
          d["pole_value"] = u.pole_value;
          d["rings"] = u.rings;
          d["iterations"] = log.iterations;
          d["final_residual"] = log.final_residual;
          return d;
        },
        py::arg("R") = 1.0, py::arg("n") = 32);

  m.def("manufactured_exact_radial", [](double R, double r) {
    return manufactured(R).exact_radial(r);
  });

  m.def("verify_manufactured",
        [](double R, long num_pairs, std::uint64_t seed) {
          const CapDomain cap(SpherePoint(Eigen::Vector3d(0, 0, 1)), R);
          const ManufacturedCase mc = manufactured_case(cap);
          const CosDistField u(cap.pole(), 1.0, -std::cos(R));
          const IsotropicOperator op{ScalarFn::identity(), 0.0, Cone::All};
          VerifyOptions opts;
          opts.num_pairs = num_pairs;
          opts.num_geodesics = 200;
          opts.num_boundary = 64;
          opts.hypothesis_trials = 300;
          opts.seed = seed;
          const ConcavityReport rep = full_report(u, cap, op, mc.rhs, opts);
          return py::module_::import("json").attr("loads")(
              report_to_json(rep).dump());
        },
        py::arg("R") = 1.0, py::arg("num_pairs") = 20000, py::arg("seed") = 1);
}
