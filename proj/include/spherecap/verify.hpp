#pragma once

// Concavity certification on a cap: the two-point function
// Z(x,y) = u(mid) - (u(x)+u(y))/2, random Z-scans, the boundary-condition
// margin, and geodesic second-difference scans.

#include "spherecap/domain.hpp"
#include "spherecap/operators.hpp"
#include "spherecap/solver.hpp"

#include <memory>
#include <optional>

namespace spherecap {

// A scalar field on the closed cap with value and tangent-gradient access.
class Field {
 public:
  virtual ~Field() = default;
  virtual double value(const SpherePoint& x) const = 0;
  virtual TangentVector gradient(const SpherePoint& x) const = 0;
};

// u(x) = scale * cos d(x, pole) + offset, with exact gradient.
class CosDistField : public Field {
 public:
  CosDistField(SpherePoint pole, double scale, double offset)
      : pole_(std::move(pole)), scale_(scale), offset_(offset) {}
  double value(const SpherePoint& x) const override;
  TangentVector gradient(const SpherePoint& x) const override;

 private:
  SpherePoint pole_;
  double scale_, offset_;
};

// View of a solved grid field through the bilinear interpolant.
class GridFieldView : public Field {
 public:
  GridFieldView(GridField field, CapDomain domain)
      : field_(std::move(field)), domain_(std::move(domain)) {}
  double value(const SpherePoint& x) const override {
    return interpolate_value(field_, domain_, x);
  }
  TangentVector gradient(const SpherePoint& x) const override {
    return interpolate_gradient(field_, domain_, x);
  }
  const GridField& grid_field() const { return field_; }

 private:
  GridField field_;
  CapDomain domain_;
};

double two_point_z(const Field& u, const SpherePoint& x, const SpherePoint& y);

struct PairSample {
  Vec x, y, z;  // ambient coordinates
  double Z = 0.0;
};

struct ZScanResult {
  double min_z = 0.0;
  PairSample argmin;
  long num_pairs = 0;
};

// Random area-uniform pairs; for grid fields, grid-node pairs are added up to
// a cap of 10^6 pairs.
ZScanResult scan_z_min(const Field& u, const CapDomain& domain, long num_pairs,
                       std::uint64_t seed, const GridField* grid = nullptr);

struct BoundaryMarginResult {
  double min_margin = 0.0;
  Vec witness_x, witness_y;
  double excluded_distance = 1e-3;  // pairs closer than this are skipped
};

// min over (x in boundary, y in closed cap) of
// Du_x(gammadot(-1)) - Du_y(gammadot(1)); positive on the sample certifies
// the boundary hypothesis.
BoundaryMarginResult boundary_margin(const Field& u, const CapDomain& domain,
                                     int num_boundary, int num_interior,
                                     std::uint64_t seed,
                                     double exclude_dist = 1e-3);

// Worst centered second difference of t -> u(gamma(t)) over random geodesics;
// <= tolerance certifies concavity along whole geodesics, not just midpoints.
double geodesic_concavity_scan(const Field& u, const CapDomain& domain,
                               int num_geodesics, int num_t,
                               std::uint64_t seed);

// Gradient-norm comparison at a pair: |grad u(z)| - max(|grad u(x)|,
// |grad u(y)|); non-positive at interior Z-minimizers.
double gradient_norm_excess(const Field& u, const PairSample& pair);

struct ConcavityReport {
  double min_z = 0.0;
  PairSample argmin;
  long num_pairs = 0;
  double boundary_margin_min = 0.0;
  Vec boundary_witness_x, boundary_witness_y;
  double geodesic_scan_worst = 0.0;
  double gradient_norm_excess_at_argmin = 0.0;
  double tolerance = 0.0;
  double boundary_exclusion = 1e-3;
  HypothesisReport f_hypotheses, b_hypotheses;
  bool verdict = false;
};

struct VerifyOptions {
  long num_pairs = 100000;
  int num_geodesics = 1000;
  int num_t = 21;
  int num_boundary = 256;
  int num_interior = 8;
  int hypothesis_trials = 2000;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;  // -tolerance lower bound for min Z
};

// Aggregate verdict: all hypothesis checks pass AND min_z >= -tolerance AND
// boundary margin > 0 AND geodesic scan worst <= tolerance.
ConcavityReport full_report(const Field& u, const CapDomain& domain,
                            const IsotropicOperator& op, const RHSSpec& rhs,
                            const VerifyOptions& opts,
                            const GridField* grid = nullptr);

// Declared interpolation tolerance for a grid resolution: 10x the observed
// interpolation error of the manufactured exact solution on the same grid.
double grid_tolerance(const CapDomain& domain, int Nr, int Ntheta);

}  // namespace spherecap
