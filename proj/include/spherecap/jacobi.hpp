#pragma once

// Closed-form Jacobi fields along sphere geodesics, finite-difference oracles
// for the variation fields of the geodesic family map
// Gamma(x, y, t) = gamma_{x,y}(t), and checks of the second-variation
// K-quantity identities.

#include "spherecap/geometry.hpp"

#include <string>
#include <vector>

namespace spherecap {

struct ConjugatePointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scalar solution of vdot2 = -speed^2 v with v(0)=0, v(2)=1:
// v(t) = sin(speed*t)/sin(2*speed), limit t/2 as speed -> 0.
double jacobi_scalar_v(double speed, double t);
double jacobi_scalar_v_deriv(double speed, double t);

enum class Endpoint { X, Y };

// Jacobi field along a segment determined by its boundary values, expressed
// in a parallel frame. The tangential coefficient is affine in t; each normal
// coefficient is a combination of v(1-t) and v(1+t).
class JacobiField {
 public:
  JacobiField(GeodesicSegment seg, const TangentVector& left,
              const TangentVector& right);

  const GeodesicSegment& segment() const { return frame_.segment(); }
  const ParallelFrame& frame() const { return frame_; }

  // Ambient value / covariant derivative D_t J at parameter t.
  Vec eval(double t) const;
  Vec derivative(double t) const;

 private:
  ParallelFrame frame_;
  Vec left_coeffs_, right_coeffs_;  // frame coefficients of the endpoint data
};

JacobiField jacobi_bvp(const GeodesicSegment& seg, const TangentVector& left,
                       const TangentVector& right);

// Central-difference derivative of t -> Gamma(x, y, t) in one endpoint
// direction, projected onto the tangent space at gamma(t). The independent
// oracle for jacobi_bvp.
std::vector<Vec> fd_jacobi_oracle(const SpherePoint& x, const SpherePoint& y,
                                  const TangentVector& direction, Endpoint at,
                                  double step, const std::vector<double>& ts);

// Mixed second endpoint-derivative K of Gamma at parameter t, realized as an
// ambient mixed central difference projected onto the tangent space at
// gamma(t). Directions at the same endpoint are combined inside a single
// exponential chart (Riemannian normal coordinates).
Vec fd_k_point(const SpherePoint& x, const SpherePoint& y,
               const TangentVector& d1, Endpoint e1, const TangentVector& d2,
               Endpoint e2, double step, double t);

std::vector<Vec> fd_k_oracle(const SpherePoint& x, const SpherePoint& y,
                             const TangentVector& d1, Endpoint e1,
                             const TangentVector& d2, Endpoint e2, double step,
                             const std::vector<double>& ts);

// Constant-curvature Riemann tensor of the unit sphere:
// Rm(X,Y)Z = <Y,Z> X - <X,Z> Y.
Vec riemann(const Vec& X, const Vec& Y, const Vec& Z);

struct KIdentityReport {
  double speed = 0.0;
  double k1_sup = 0.0;          // sup_t |K1(t)|
  double k2_at_zero = 0.0;      // |K2(0)|
  double k3_at_zero = 0.0;      // |K3(0)|
  double k_boundary_max = 0.0;  // max |K(t)| at t = +-1 over tested K's
  double k00_sup = 0.0;         // sup_t |K_{x0 x0}|, |K_{y0 y0}|, |K_{x0 y0}|
  double evk_residual_max = 0.0;
  double k2_mid_sample = 0.0;  // |K2(0.5)|, generally nonzero
};

// Verifies the K identities (K1 == 0 on [-1,1]; K2(0) = K3(0) = 0; K = 0 at
// t = +-1; the differentiated Jacobi equation residual) along one segment,
// with xi given as coefficients against the normal frame members.
KIdentityReport check_k_identities(const GeodesicSegment& seg,
                                   const Vec& xi_coeffs, double step);

}  // namespace spherecap
