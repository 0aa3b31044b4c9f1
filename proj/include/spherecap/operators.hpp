#pragma once

// Concrete operator families f(p, W) = phi(p) + tr(psi(W)) and right-hand
// sides b(x, u, p) = c(x) - lambda*u - mu*p, with randomized checkers for the
// monotonicity / convexity / concavity hypotheses they must satisfy.

#include "spherecap/domain.hpp"
#include "spherecap/spectral.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spherecap {

struct ConeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Cone { All, Positive };

// Named scalar function applied per-eigenvalue (and as an operator function).
struct ScalarFn {
  std::string name;  // "identity" | "exp" | "power" | custom
  double exponent = 1.0;
  std::function<double(double)> custom;

  double operator()(double x) const;

  static ScalarFn identity();
  static ScalarFn exponential();
  static ScalarFn power(double p);
  static ScalarFn make_custom(std::string name, std::function<double(double)> fn);
};

struct IsotropicOperator {
  ScalarFn psi;
  double phi_slope = 0.0;  // phi(p) = phi_slope * p
  Cone cone = Cone::All;

  double phi(double p) const { return phi_slope * p; }
};

double eval_f(const IsotropicOperator& op, double p, const SymmetricMatrix& W);

enum class CFormKind { Constant, CosDist, ExpCos };

// c(x) = a*exp(cos d(x,pole)) + bcos*cos d(x,pole) + k
// (Constant: a = bcos = 0; CosDist: a = 0).
struct RHSSpec {
  CFormKind c_kind = CFormKind::Constant;
  double a = 0.0;
  double bcos = 0.0;
  double k = 0.0;
  SpherePoint pole = SpherePoint(Eigen::Vector3d(0.0, 0.0, 1.0));
  double lambda = 1.0;  // coefficient of -u, must be > 0 for the hypotheses
  double mu = 0.0;      // coefficient of -|grad u|

  double c_radial(double r) const;
  double c(const SpherePoint& x) const { return c_radial(distance(pole, x)); }
};

double eval_b(const RHSSpec& rhs, const SpherePoint& x, double u, double p);
double eval_b_radial(const RHSSpec& rhs, double r, double u, double p);

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double worst_violation = 0.0;
  std::string witness;  // description of the worst sample
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass() const;
};

// Randomized verification of the operator hypotheses: monotone in p,
// eigenvalue-monotone, midpoint-convex in the matrix argument, plus the
// orthogonal-invariance (isotropy) spot check.
HypothesisReport check_f_hypotheses(const IsotropicOperator& op, int trials,
                                    std::uint64_t seed);

// Randomized verification of the right-hand-side hypotheses on a cap:
// midpoint concavity in (x, u), strict decrease in u, decrease in p.
HypothesisReport check_b_hypotheses(const RHSSpec& rhs, const CapDomain& domain,
                                    int trials, std::uint64_t seed);

}  // namespace spherecap
