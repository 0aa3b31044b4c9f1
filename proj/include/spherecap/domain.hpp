#pragma once

// Geodesically convex spherical caps {d(x, pole) <= R}, R < pi/2, together
// with deterministic area-uniform sampling.

#include "spherecap/geometry.hpp"
#include "spherecap/rng.hpp"

namespace spherecap {

class CapDomain {
 public:
  CapDomain(SpherePoint pole, double radius);

  const SpherePoint& pole() const { return pole_; }
  double radius() const { return radius_; }
  int dimension() const { return pole_.dimension(); }

  bool contains(const SpherePoint& x, double slack = 1e-12) const {
    return distance(pole_, x) <= radius_ + slack;
  }

  // Tangent axes at the pole defining the angular coordinate (n = 2 only).
  const Vec& axis1() const { return e1_; }
  const Vec& axis2() const { return e2_; }

  // Polar coordinates of a point: r = d(x,pole), theta = atan2 in the axes.
  std::pair<double, double> polar(const SpherePoint& x) const;

  // Point at polar coordinates (r, theta).
  SpherePoint from_polar(double r, double theta) const;

  // Area-uniform sample in the closed cap (cos r uniform in [cos R, 1]).
  SpherePoint sample_interior(Rng& rng) const;

  // Uniform sample on the boundary circle r = R.
  SpherePoint sample_boundary(Rng& rng) const;

 private:
  SpherePoint pole_;
  double radius_;
  Vec e1_, e2_;
};

}  // namespace spherecap
