#include "spherecap/jacobi.hpp"

#include <cmath>

namespace spherecap {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
// Guard band: v(t) = sin(st)/sin(2s) blows up as the endpoints approach a
// conjugate pair at s = pi/2.
constexpr double kConjugateGuard = 1e-3;

void require_speed(double speed) {
  if (!(speed >= 0.0)) throw GeometryError("negative speed");
  if (speed >= kHalfPi - kConjugateGuard) {
    throw ConjugatePointError("speed too close to pi/2 (conjugate points)");
  }
}

Vec project_tangent(const Vec& v, const SpherePoint& p) {
  return v - v.dot(p.coords()) * p.coords();
}
}  // namespace

double jacobi_scalar_v(double speed, double t) {
  require_speed(speed);
  if (speed < 1e-8) return t / 2.0;
  return std::sin(speed * t) / std::sin(2.0 * speed);
}

double jacobi_scalar_v_deriv(double speed, double t) {
  require_speed(speed);
  if (speed < 1e-8) return 0.5;
  return speed * std::cos(speed * t) / std::sin(2.0 * speed);
}

JacobiField::JacobiField(GeodesicSegment seg, const TangentVector& left,
                         const TangentVector& right)
    : frame_(std::move(seg)) {
  const GeodesicSegment& s = frame_.segment();
  require_speed(s.speed());
  if ((left.base().coords() - s.x().coords()).norm() > 1e-9 ||
      (right.base().coords() - s.y().coords()).norm() > 1e-9) {
    throw GeometryError("jacobi_bvp: boundary data not based at endpoints");
  }
  const int n = frame_.count();
  left_coeffs_ = Vec(n);
  right_coeffs_ = Vec(n);
  left_coeffs_(0) = left.vec().dot(frame_.vector(0, -1.0));
  right_coeffs_(0) = right.vec().dot(frame_.vector(0, 1.0));
  for (int a = 1; a < n; ++a) {
    left_coeffs_(a) = left.vec().dot(frame_.normal(a));
    right_coeffs_(a) = right.vec().dot(frame_.normal(a));
  }
}

Vec JacobiField::eval(double t) const {
  const double sp = frame_.segment().speed();
  const double c0 =
      0.5 * (1.0 - t) * left_coeffs_(0) + 0.5 * (1.0 + t) * right_coeffs_(0);
  Vec out = c0 * frame_.vector(0, t);
  for (int a = 1; a < frame_.count(); ++a) {
    const double ca = left_coeffs_(a) * jacobi_scalar_v(sp, 1.0 - t) +
                      right_coeffs_(a) * jacobi_scalar_v(sp, 1.0 + t);
    out += ca * frame_.normal(a);
  }
  return out;
}

Vec JacobiField::derivative(double t) const {
  const double sp = frame_.segment().speed();
  const double dc0 = 0.5 * (right_coeffs_(0) - left_coeffs_(0));
  Vec out = dc0 * frame_.vector(0, t);
  for (int a = 1; a < frame_.count(); ++a) {
    const double dca = -left_coeffs_(a) * jacobi_scalar_v_deriv(sp, 1.0 - t) +
                       right_coeffs_(a) * jacobi_scalar_v_deriv(sp, 1.0 + t);
    out += dca * frame_.normal(a);
  }
  return out;
}

JacobiField jacobi_bvp(const GeodesicSegment& seg, const TangentVector& left,
                       const TangentVector& right) {
  return JacobiField(seg, left, right);
}

std::vector<Vec> fd_jacobi_oracle(const SpherePoint& x, const SpherePoint& y,
                                  const TangentVector& direction, Endpoint at,
                                  double step, const std::vector<double>& ts) {
  if (!(step > 0.0 && step <= 1e-2)) {
    throw GeometryError("fd_jacobi_oracle: step outside (0, 1e-2]");
  }
  const GeodesicSegment base = geodesic(x, y);
  auto perturbed = [&](double s) {
    SpherePoint p = exp_map(TangentVector(direction.base(), s * direction.vec()));
    return (at == Endpoint::X) ? geodesic(p, y) : geodesic(x, p);
  };
  const GeodesicSegment plus = perturbed(step);
  const GeodesicSegment minus = perturbed(-step);
  std::vector<Vec> out;
  out.reserve(ts.size());
  for (double t : ts) {
    Vec d = (eval_geodesic(plus, t).coords() - eval_geodesic(minus, t).coords()) /
            (2.0 * step);
    out.push_back(project_tangent(d, eval_geodesic(base, t)));
  }
  return out;
}

Vec fd_k_point(const SpherePoint& x, const SpherePoint& y,
               const TangentVector& d1, Endpoint e1, const TangentVector& d2,
               Endpoint e2, double step, double t) {
  if (!(step > 0.0 && step <= 1e-2)) {
    throw GeometryError("fd_k_point: step outside (0, 1e-2]");
  }
  const GeodesicSegment base = geodesic(x, y);
  auto endpoint_pair = [&](double s1, double s2) {
    SpherePoint px = x;
    SpherePoint py = y;
    if (e1 == e2) {
      // Both directions at one endpoint: single exponential chart so the
      // difference realizes the Hessian in normal coordinates.
      Vec w = s1 * d1.vec() + s2 * d2.vec();
      SpherePoint p = exp_map(TangentVector(d1.base(), std::move(w)));
      (e1 == Endpoint::X ? px : py) = p;
    } else {
      SpherePoint p1 = exp_map(TangentVector(d1.base(), s1 * d1.vec()));
      SpherePoint p2 = exp_map(TangentVector(d2.base(), s2 * d2.vec()));
      (e1 == Endpoint::X ? px : py) = p1;
      (e2 == Endpoint::X ? px : py) = p2;
    }
    return geodesic(px, py);
  };
  Vec acc = Vec::Zero(x.coords().size());
  for (int i : {-1, 1}) {
    for (int j : {-1, 1}) {
      const GeodesicSegment g = endpoint_pair(i * step, j * step);
      acc += static_cast<double>(i * j) * eval_geodesic(g, t).coords();
    }
  }
  acc /= 4.0 * step * step;
  return project_tangent(acc, eval_geodesic(base, t));
}

std::vector<Vec> fd_k_oracle(const SpherePoint& x, const SpherePoint& y,
                             const TangentVector& d1, Endpoint e1,
                             const TangentVector& d2, Endpoint e2, double step,
                             const std::vector<double>& ts) {
  std::vector<Vec> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(fd_k_point(x, y, d1, e1, d2, e2, step, t));
  return out;
}

Vec riemann(const Vec& X, const Vec& Y, const Vec& Z) {
  return Y.dot(Z) * X - X.dot(Z) * Y;
}

KIdentityReport check_k_identities(const GeodesicSegment& seg,
                                   const Vec& xi_coeffs, double step) {
  require_speed(seg.speed());
  if (seg.degenerate()) throw GeometryError("check_k_identities: degenerate");
  const ParallelFrame frame(seg);
  const int n = frame.count();
  if (xi_coeffs.size() != n - 1) {
    throw GeometryError("check_k_identities: xi has wrong size");
  }
  const SpherePoint& x = seg.x();
  const SpherePoint& y = seg.y();

  Vec xi = Vec::Zero(x.coords().size());
  for (int a = 1; a < n; ++a) xi += xi_coeffs(a - 1) * frame.normal(a);
  const double xin = xi.norm();
  if (xin > 0) xi /= xin;

  const TangentVector x0(x, frame.vector(0, -1.0));
  const TangentVector y0(y, frame.vector(0, 1.0));
  const TangentVector xxi(x, xi);
  const TangentVector yxi(y, xi);

  KIdentityReport rep;
  rep.speed = seg.speed();

  auto K = [&](const TangentVector& a, Endpoint ea, const TangentVector& b,
               Endpoint eb, double t) {
    return fd_k_point(x, y, a, ea, b, eb, step, t);
  };

  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(-1.0 + 0.1 * i);

  for (double t : grid) {
    // Lemma 3.2 (i): the purely tangential K's vanish identically.
    const double k00 =
        std::max({K(x0, Endpoint::X, x0, Endpoint::X, t).norm(),
                  K(y0, Endpoint::Y, y0, Endpoint::Y, t).norm(),
                  K(x0, Endpoint::X, y0, Endpoint::Y, t).norm()});
    rep.k00_sup = std::max(rep.k00_sup, k00);

    // Lemma 3.2 (ii): K1 = K_{x0 xa} + K_{y0 ya} + K_{x0 ya} + K_{y0 xa} = 0.
    Vec k1 = K(x0, Endpoint::X, xxi, Endpoint::X, t) +
             K(y0, Endpoint::Y, yxi, Endpoint::Y, t) +
             K(x0, Endpoint::X, yxi, Endpoint::Y, t) +
             K(y0, Endpoint::Y, xxi, Endpoint::X, t);
    rep.k1_sup = std::max(rep.k1_sup, k1.norm());
  }

  // Normal-normal combinations; the mixed partials K_{xy} and K_{yx} coincide
  // as finite differences, giving the factor 2.
  auto k23 = [&](double t, double sign) {
    return (K(xxi, Endpoint::X, xxi, Endpoint::X, t) +
            K(yxi, Endpoint::Y, yxi, Endpoint::Y, t) +
            sign * 2.0 * K(xxi, Endpoint::X, yxi, Endpoint::Y, t))
        .eval();
  };
  rep.k2_at_zero = k23(0.0, 1.0).norm();
  rep.k3_at_zero = k23(0.0, -1.0).norm();
  rep.k2_mid_sample = k23(0.5, 1.0).norm();

  for (double t : {-1.0, 1.0}) {
    rep.k_boundary_max =
        std::max({rep.k_boundary_max,
                  K(xxi, Endpoint::X, xxi, Endpoint::X, t).norm(),
                  K(yxi, Endpoint::Y, yxi, Endpoint::Y, t).norm(),
                  K(xxi, Endpoint::X, yxi, Endpoint::Y, t).norm(),
                  K(x0, Endpoint::X, xxi, Endpoint::X, t).norm()});
  }

  // Differentiated Jacobi equation residual for K_{x^xi x^xi}:
  // D_t^2 K + Rm(K, G') G' + 4 Rm(J, G') D_t J = 0,
  // with the closed-form J_{x^xi}(t) = v(1-t) xi and constant-curvature Rm.
  const double sp = seg.speed();
  const double dt = 0.02;
  // Fourth-order 5-point stencil for the covariant second derivative, with
  // Richardson extrapolation of the K samples in the endpoint step; both the
  // second-order stencil and the raw K truncation error are too large near
  // the conjugate speed.
  const double sten[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
  auto K_extrap = [&](double t) {
    const Vec kh = K(xxi, Endpoint::X, xxi, Endpoint::X, t);
    const Vec kh2 = fd_k_point(x, y, xxi, Endpoint::X, xxi, Endpoint::X,
                               0.5 * step, t);
    return ((4.0 * kh2 - kh) / 3.0).eval();
  };
  for (int i = -4; i <= 4; ++i) {
    const double t = 0.2 * i;
    std::vector<Vec> ks;
    for (int s = -2; s <= 2; ++s) {
      ks.push_back(K_extrap(t + s * dt));
    }
    const Vec& k0 = ks[2];
    Vec d2k = Vec::Zero(x.coords().size());
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      for (int s = -2; s <= 2; ++s) {
        acc += sten[s + 2] * ks[s + 2].dot(frame.vector(a, t + s * dt));
      }
      d2k += (acc / (12.0 * dt * dt)) * frame.vector(a, t);
    }
    const Vec gdot = sp * seg.unit_tangent(t);
    const Vec J = jacobi_scalar_v(sp, 1.0 - t) * xi;
    const Vec dJ = -jacobi_scalar_v_deriv(sp, 1.0 - t) * xi;
    const Vec res = d2k + riemann(k0, gdot, gdot) + 4.0 * riemann(J, gdot, dJ);
    rep.evk_residual_max = std::max(rep.evk_residual_max, res.norm());
  }
  return rep;
}

}  // namespace spherecap
