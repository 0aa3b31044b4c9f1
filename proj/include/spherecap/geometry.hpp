#pragma once

// Closed-form geometry of the round unit sphere S^n embedded in R^{n+1}:
// points, tangent vectors, minimizing geodesics parametrized on [-1,1],
// exponential/logarithm maps, parallel transport and parallel frames.
//
// All types are immutable value types; all operations are pure.

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace spherecap {

using Vec = Eigen::VectorXd;

struct AntipodalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unit vector in ambient (n+1)-space, n >= 2. Renormalized on construction.
class SpherePoint {
 public:
  explicit SpherePoint(Vec coords);

  const Vec& coords() const { return coords_; }
  int dimension() const { return static_cast<int>(coords_.size()) - 1; }

 private:
  Vec coords_;
};

SpherePoint make_point(const Vec& coords);

// Tangent data at a base point: vec is orthogonal to base.coords.
class TangentVector {
 public:
  TangentVector(SpherePoint base, Vec vec);

  const SpherePoint& base() const { return base_; }
  const Vec& vec() const { return vec_; }
  double norm() const { return vec_.norm(); }

 private:
  SpherePoint base_;
  Vec vec_;
};

// Minimizing geodesic gamma: [-1,1] -> S^n with gamma(-1)=x, gamma(1)=y.
// speed = d(x,y)/2 in [0, pi/2). Degenerate segments (x == y) are allowed.
class GeodesicSegment {
 public:
  GeodesicSegment(SpherePoint x, SpherePoint y);

  const SpherePoint& x() const { return x_; }
  const SpherePoint& y() const { return y_; }
  double speed() const { return speed_; }
  bool degenerate() const { return speed_ == 0.0; }

  // Unit tangent at x pointing toward y (zero for degenerate segments).
  const Vec& initial_direction() const { return dir_; }

  // Unit tangent vector field along the geodesic, as an ambient vector.
  Vec unit_tangent(double t) const;

 private:
  SpherePoint x_, y_;
  double speed_;
  Vec dir_;
};

double distance(const SpherePoint& x, const SpherePoint& y);

GeodesicSegment geodesic(const SpherePoint& x, const SpherePoint& y);

SpherePoint eval_geodesic(const GeodesicSegment& seg, double t);

TangentVector velocity(const GeodesicSegment& seg, double t);

SpherePoint exp_map(const TangentVector& v);

TangentVector log_map(const SpherePoint& x, const SpherePoint& y);

TangentVector parallel_transport(const TangentVector& v,
                                 const GeodesicSegment& seg, double t0,
                                 double t1);

// Exact geodesic midpoint, symmetric in (x, y) to the last bit.
SpherePoint midpoint(const SpherePoint& x, const SpherePoint& y);

// Parallel orthonormal frame E_0,...,E_{n-1} along a geodesic; E_0 is the
// normalized tangent, E_1..E_{n-1} are constant ambient vectors spanning the
// orthogonal complement of the great-circle plane.
class ParallelFrame {
 public:
  explicit ParallelFrame(GeodesicSegment seg);

  const GeodesicSegment& segment() const { return seg_; }
  int count() const { return static_cast<int>(normals_.size()) + 1; }

  // Ambient vector of E_i at parameter t (i = 0 is tangential).
  Vec vector(int i, double t) const;

  // Constant ambient vector of the normal frame member E_alpha, alpha >= 1.
  const Vec& normal(int alpha) const { return normals_.at(alpha - 1); }

 private:
  GeodesicSegment seg_;
  std::vector<Vec> normals_;
};

ParallelFrame parallel_frame(const GeodesicSegment& seg);

}  // namespace spherecap
