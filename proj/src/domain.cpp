#include "spherecap/domain.hpp"

#include <cmath>

namespace spherecap {

CapDomain::CapDomain(SpherePoint pole, double radius)
    : pole_(std::move(pole)), radius_(radius), e1_(0), e2_(0) {
  if (!(radius > 0.0 && radius < 1.5707963267948966)) {
    throw GeometryError("CapDomain: radius must lie in (0, pi/2)");
  }
  if (pole_.dimension() != 2) {
    throw GeometryError("CapDomain: only S^2 caps are supported");
  }
  // Deterministic tangent axes at the pole.
  const Vec& p = pole_.coords();
  Vec trial = Vec::Zero(3);
  trial(std::abs(p(0)) < 0.9 ? 0 : 1) = 1.0;
  e1_ = trial - trial.dot(p) * p;
  e1_ /= e1_.norm();
  e2_ = Vec(3);
  e2_(0) = p(1) * e1_(2) - p(2) * e1_(1);
  e2_(1) = p(2) * e1_(0) - p(0) * e1_(2);
  e2_(2) = p(0) * e1_(1) - p(1) * e1_(0);
}

std::pair<double, double> CapDomain::polar(const SpherePoint& x) const {
  const double r = distance(pole_, x);
  const double theta =
      std::atan2(x.coords().dot(e2_), x.coords().dot(e1_));
  return {r, theta};
}

SpherePoint CapDomain::from_polar(double r, double theta) const {
  Vec dir = std::cos(theta) * e1_ + std::sin(theta) * e2_;
  Vec p = std::cos(r) * pole_.coords() + std::sin(r) * dir;
  return SpherePoint(std::move(p));
}

SpherePoint CapDomain::sample_interior(Rng& rng) const {
  const double c = rng.uniform(std::cos(radius_), 1.0);
  const double r = std::acos(std::min(1.0, c));
  const double theta = rng.uniform(0.0, 6.283185307179586);
  return from_polar(r, theta);
}

SpherePoint CapDomain::sample_boundary(Rng& rng) const {
  return from_polar(radius_, rng.uniform(0.0, 6.283185307179586));
}

}  // namespace spherecap
