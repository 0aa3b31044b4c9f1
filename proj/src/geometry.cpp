#include "spherecap/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace spherecap {

namespace {
constexpr double kAntipodalThreshold = 1e-8;
}

SpherePoint::SpherePoint(Vec coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) {
    throw GeometryError("SpherePoint: ambient dimension must be >= 3 (n >= 2)");
  }
  const double nrm = coords_.norm();
  if (!(nrm > 1e-10)) {
    throw GeometryError("SpherePoint: near-zero coordinate vector");
  }
  coords_ /= nrm;
}

SpherePoint make_point(const Vec& coords) { return SpherePoint(coords); }

TangentVector::TangentVector(SpherePoint base, Vec vec)
    : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != base_.coords().size()) {
    throw GeometryError("TangentVector: dimension mismatch");
  }
  const double dot = vec_.dot(base_.coords());
  if (std::abs(dot) > 1e-9 * std::max(1.0, vec_.norm())) {
    throw GeometryError("TangentVector: not orthogonal to base point");
  }
  vec_ -= dot * base_.coords();  // remove roundoff drift
}

double distance(const SpherePoint& x, const SpherePoint& y) {
  if (x.coords().size() != y.coords().size()) {
    throw GeometryError("distance: dimension mismatch");
  }
  const double c = std::clamp(x.coords().dot(y.coords()), -1.0, 1.0);
  return std::acos(c);
}

GeodesicSegment::GeodesicSegment(SpherePoint x, SpherePoint y)
    : x_(std::move(x)), y_(std::move(y)) {
  if ((x_.coords() + y_.coords()).norm() <= kAntipodalThreshold) {
    throw AntipodalError("geodesic: endpoints are antipodal");
  }
  const double d = distance(x_, y_);
  speed_ = d / 2.0;
  Vec w = y_.coords() - x_.coords().dot(y_.coords()) * x_.coords();
  const double wn = w.norm();
  if (wn < 1e-14 || d == 0.0) {
    speed_ = 0.0;
    dir_ = Vec::Zero(x_.coords().size());
  } else {
    dir_ = w / wn;
  }
}

Vec GeodesicSegment::unit_tangent(double t) const {
  if (degenerate()) return Vec::Zero(x_.coords().size());
  const double theta = speed_ * (t + 1.0);
  return -std::sin(theta) * x_.coords() + std::cos(theta) * dir_;
}

GeodesicSegment geodesic(const SpherePoint& x, const SpherePoint& y) {
  return GeodesicSegment(x, y);
}

SpherePoint eval_geodesic(const GeodesicSegment& seg, double t) {
  if (t < -1.0 - 1e-12 || t > 1.0 + 1e-12) {
    throw GeometryError("eval_geodesic: t outside [-1,1]");
  }
  if (seg.degenerate()) return seg.x();
  const double theta = seg.speed() * (t + 1.0);
  Vec p = std::cos(theta) * seg.x().coords() +
          std::sin(theta) * seg.initial_direction();
  return SpherePoint(std::move(p));
}

TangentVector velocity(const GeodesicSegment& seg, double t) {
  SpherePoint p = eval_geodesic(seg, t);
  if (seg.degenerate()) {
    return TangentVector(p, Vec::Zero(seg.x().coords().size()));
  }
  return TangentVector(p, seg.speed() * seg.unit_tangent(t));
}

SpherePoint exp_map(const TangentVector& v) {
  const double nrm = v.norm();
  if (nrm < 1e-300) return v.base();
  Vec p = std::cos(nrm) * v.base().coords() + std::sin(nrm) / nrm * v.vec();
  return SpherePoint(std::move(p));
}

TangentVector log_map(const SpherePoint& x, const SpherePoint& y) {
  if ((x.coords() + y.coords()).norm() <= kAntipodalThreshold) {
    throw AntipodalError("log_map: points are antipodal");
  }
  const double d = distance(x, y);
  Vec w = y.coords() - x.coords().dot(y.coords()) * x.coords();
  const double wn = w.norm();
  if (wn < 1e-14 || d == 0.0) {
    return TangentVector(x, Vec::Zero(x.coords().size()));
  }
  return TangentVector(x, (d / wn) * w);
}

TangentVector parallel_transport(const TangentVector& v,
                                 const GeodesicSegment& seg, double t0,
                                 double t1) {
  if (seg.degenerate() || t0 == t1) {
    return TangentVector(eval_geodesic(seg, t1), v.vec());
  }
  const Vec T0 = seg.unit_tangent(t0);
  const Vec T1 = seg.unit_tangent(t1);
  const double a = v.vec().dot(T0);
  // The complement of the great-circle plane is parallel along the geodesic.
  Vec w = v.vec() - a * T0;
  return TangentVector(eval_geodesic(seg, t1), a * T1 + w);
}

SpherePoint midpoint(const SpherePoint& x, const SpherePoint& y) {
  Vec s = x.coords() + y.coords();
  if (s.norm() <= kAntipodalThreshold) {
    throw AntipodalError("midpoint: points are antipodal");
  }
  return SpherePoint(std::move(s));
}

ParallelFrame::ParallelFrame(GeodesicSegment seg) : seg_(std::move(seg)) {
  if (seg_.degenerate()) {
    throw GeometryError("parallel_frame: degenerate segment");
  }
  const int m = static_cast<int>(seg_.x().coords().size());
  // Complete {x, dir} to an orthonormal basis of R^{n+1}; the trailing m-2
  // columns of Q span the plane's orthogonal complement.
  Eigen::MatrixXd A(m, 2);
  A.col(0) = seg_.x().coords();
  A.col(1) = seg_.initial_direction();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  // Householder may flip signs; re-orthogonalize against the exact plane.
  normals_.reserve(m - 2);
  for (int k = 2; k < m; ++k) {
    Vec q = Q.col(k);
    q -= q.dot(seg_.x().coords()) * seg_.x().coords();
    q -= q.dot(seg_.initial_direction()) * seg_.initial_direction();
    for (const Vec& prev : normals_) q -= q.dot(prev) * prev;
    normals_.push_back(q / q.norm());
  }
}

Vec ParallelFrame::vector(int i, double t) const {
  if (i == 0) return seg_.unit_tangent(t);
  return normal(i);
}

ParallelFrame parallel_frame(const GeodesicSegment& seg) {
  return ParallelFrame(seg);
}

}  // namespace spherecap
