#pragma once

// Finite-difference solvers for f(|grad u|, -Hess u) = b(., u, |grad u|) on
// spherical caps of S^2: a 2-D semilinear path (f = -Laplacian) on a geodesic
// polar grid, and a 1-D radial fully nonlinear path for general psi.

#include "spherecap/domain.hpp"
#include "spherecap/operators.hpp"

#include <optional>

namespace spherecap {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MaxIterError : SolverError {
  double last_residual;
  explicit MaxIterError(double r)
      : SolverError("Newton iteration did not converge"), last_residual(r) {}
};

// Uniform polar grid on a cap: r_i = i*hr (i = 0..Nr), theta_j = j*ht
// (j = 0..Ntheta-1, periodic); r = 0 is a single shared pole node.
struct PolarGrid {
  int Nr = 0;
  int Ntheta = 0;
  double R = 0.0;

  double hr() const { return R / Nr; }
  double htheta() const { return 6.283185307179586 / Ntheta; }
};

// Nodal values on a polar grid. ring(i) rows hold i = 1..Nr; the pole value
// is stored once.
struct GridField {
  PolarGrid grid;
  double pole_value = 0.0;
  Eigen::MatrixXd rings;  // (Nr) x (Ntheta), row i-1 is radius index i

  double at(int i, int j) const {
    return i == 0 ? pole_value : rings(i - 1, j);
  }
};

enum class SolverMode { Semilinear2D, RadialFullyNonlinear1D };

struct SolverConfig {
  SolverMode mode = SolverMode::Semilinear2D;
  IsotropicOperator op{ScalarFn::identity(), 0.0, Cone::All};
  RHSSpec rhs;
  CapDomain domain{SpherePoint(Eigen::Vector3d(0.0, 0.0, 1.0)), 1.0};
  int Nr = 64;
  int Ntheta = 64;
  double tol_residual = 1e-10;
  int max_iter = 200;
};

struct SolveLog {
  int iterations = 0;
  double final_residual = 0.0;
};

// Second-order Laplace-Beltrami stencil in geodesic polar coordinates,
// Delta u = u_rr + cot(r) u_r + u_thth / sin^2(r); pole closed by first-ring
// averaging. Boundary rows of the result are zero.
GridField discrete_laplacian(const GridField& u);

GridField solve_semilinear(const SolverConfig& config, SolveLog* log = nullptr);

struct RadialField {
  double R = 0.0;
  Eigen::VectorXd values;  // u(r_i), i = 0..Nr

  double hr() const { return R / (values.size() - 1); }
};

RadialField solve_radial_fully_nonlinear(const SolverConfig& config,
                                         SolveLog* log = nullptr);

// Manufactured semilinear instance on a cap of radius R:
// b(x, u) = 3 cos d(x,pole) - cos R - u with exact solution
// u*(x) = cos d(x,pole) - cos R.
struct ManufacturedCase {
  RHSSpec rhs;
  std::function<double(const SpherePoint&)> exact;
  std::function<double(double)> exact_radial;
};
ManufacturedCase manufactured_case(const CapDomain& domain);

// Bilinear interpolation in (r, theta) with periodic theta; value plus a
// tangent-space gradient estimate by centered differences of the interpolant.
double interpolate_value(const GridField& u, const CapDomain& domain,
                         const SpherePoint& x);
TangentVector interpolate_gradient(const GridField& u, const CapDomain& domain,
                                   const SpherePoint& x);

// Nodal sphere point of grid node (i, j).
SpherePoint grid_node(const PolarGrid& grid, const CapDomain& domain, int i,
                      int j);

}  // namespace spherecap
