#include "spherecap/verify.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace spherecap {

double CosDistField::value(const SpherePoint& x) const {
  return scale_ * x.coords().dot(pole_.coords()) + offset_;
}

TangentVector CosDistField::gradient(const SpherePoint& x) const {
  // grad <x,p> on the sphere is the tangential projection of p.
  Vec g = scale_ * (pole_.coords() -
                    x.coords().dot(pole_.coords()) * x.coords());
  return TangentVector(x, std::move(g));
}

double two_point_z(const Field& u, const SpherePoint& x, const SpherePoint& y) {
  const SpherePoint z = midpoint(x, y);
  return u.value(z) - 0.5 * (u.value(x) + u.value(y));
}

namespace {

PairSample make_sample(const Field& u, const SpherePoint& x,
                       const SpherePoint& y) {
  const SpherePoint z = midpoint(x, y);
  PairSample s{x.coords(), y.coords(), z.coords(), 0.0};
  s.Z = u.value(z) - 0.5 * (u.value(x) + u.value(y));
  return s;
}

}  // namespace

ZScanResult scan_z_min(const Field& u, const CapDomain& domain, long num_pairs,
                       std::uint64_t seed, const GridField* grid) {
  if (num_pairs < 1) throw std::invalid_argument("scan_z_min: num_pairs < 1");
  Rng master(seed);
  ZScanResult out;
  bool first = true;
  auto consider = [&](const SpherePoint& x, const SpherePoint& y) {
    PairSample s = make_sample(u, x, y);
    ++out.num_pairs;
    if (first || s.Z < out.min_z) {
      out.min_z = s.Z;
      out.argmin = s;
      first = false;
    }
  };
  for (long k = 0; k < num_pairs; ++k) {
    Rng rng = master.substream(static_cast<std::uint64_t>(k));
    consider(domain.sample_interior(rng), domain.sample_interior(rng));
  }
  if (grid != nullptr) {
    const PolarGrid& g = grid->grid;
    std::vector<SpherePoint> nodes;
    nodes.push_back(domain.pole());
    for (int i = 1; i <= g.Nr; ++i)
      for (int j = 0; j < g.Ntheta; ++j)
        nodes.push_back(grid_node(g, domain, i, j));
    const long m = static_cast<long>(nodes.size());
    const long cap = 1000000;
    if (m * m <= cap) {
      for (long a = 0; a < m; ++a)
        for (long b = a; b < m; ++b) consider(nodes[a], nodes[b]);
    } else {
      Rng rng = master.substream(0x6e6f646573ULL);
      for (long k = 0; k < cap; ++k) {
        const long a = static_cast<long>(rng.uniform() * m);
        const long b = static_cast<long>(rng.uniform() * m);
        consider(nodes[std::min(a, m - 1)], nodes[std::min(b, m - 1)]);
      }
    }
  }
  return out;
}

BoundaryMarginResult boundary_margin(const Field& u, const CapDomain& domain,
                                     int num_boundary, int num_interior,
                                     std::uint64_t seed, double exclude_dist) {
  Rng master(seed);
  BoundaryMarginResult out;
  out.excluded_distance = exclude_dist;
  bool first = true;
  for (int bi = 0; bi < num_boundary; ++bi) {
    Rng rng = master.substream(static_cast<std::uint64_t>(bi));
    const SpherePoint x = domain.sample_boundary(rng);
    for (int ii = 0; ii < num_interior; ++ii) {
      // Every fourth companion lies on the boundary: y ranges over the
      // closed cap in the hypothesis.
      const SpherePoint y = (ii % 4 == 3) ? domain.sample_boundary(rng)
                                          : domain.sample_interior(rng);
      if (distance(x, y) < exclude_dist) continue;
      const GeodesicSegment seg = geodesic(x, y);
      const double margin = u.gradient(x).vec().dot(velocity(seg, -1.0).vec()) -
                            u.gradient(y).vec().dot(velocity(seg, 1.0).vec());
      if (first || margin < out.min_margin) {
        out.min_margin = margin;
        out.witness_x = x.coords();
        out.witness_y = y.coords();
        first = false;
      }
    }
  }
  if (first) throw std::runtime_error("boundary_margin: no admissible pairs");
  return out;
}

double geodesic_concavity_scan(const Field& u, const CapDomain& domain,
                               int num_geodesics, int num_t,
                               std::uint64_t seed) {
  if (num_t < 5) throw std::invalid_argument("geodesic_concavity_scan: num_t < 5");
  Rng master(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_geodesics; ++k) {
    Rng rng = master.substream(static_cast<std::uint64_t>(k));
    const SpherePoint x = domain.sample_interior(rng);
    const SpherePoint y = domain.sample_interior(rng);
    const GeodesicSegment seg = geodesic(x, y);
    if (seg.degenerate()) continue;
    std::vector<double> vals(num_t);
    for (int i = 0; i < num_t; ++i) {
      const double t = -1.0 + 2.0 * i / (num_t - 1);
      vals[i] = u.value(eval_geodesic(seg, t));
    }
    for (int i = 1; i + 1 < num_t; ++i) {
      worst = std::max(worst, vals[i - 1] - 2.0 * vals[i] + vals[i + 1]);
    }
  }
  return worst;
}

double gradient_norm_excess(const Field& u, const PairSample& pair) {
  const SpherePoint x(pair.x), y(pair.y), z(pair.z);
  const double gx = u.gradient(x).norm();
  const double gy = u.gradient(y).norm();
  const double gz = u.gradient(z).norm();
  return gz - std::max(gx, gy);
}

ConcavityReport full_report(const Field& u, const CapDomain& domain,
                            const IsotropicOperator& op, const RHSSpec& rhs,
                            const VerifyOptions& opts, const GridField* grid) {
  ConcavityReport rep;
  rep.tolerance = opts.tolerance;
  rep.f_hypotheses = check_f_hypotheses(op, opts.hypothesis_trials, opts.seed);
  rep.b_hypotheses =
      check_b_hypotheses(rhs, domain, opts.hypothesis_trials, opts.seed + 1);

  const ZScanResult scan =
      scan_z_min(u, domain, opts.num_pairs, opts.seed + 2, grid);
  rep.min_z = scan.min_z;
  rep.argmin = scan.argmin;
  rep.num_pairs = scan.num_pairs;

  const BoundaryMarginResult bm = boundary_margin(
      u, domain, opts.num_boundary, opts.num_interior, opts.seed + 3);
  rep.boundary_margin_min = bm.min_margin;
  rep.boundary_witness_x = bm.witness_x;
  rep.boundary_witness_y = bm.witness_y;
  rep.boundary_exclusion = bm.excluded_distance;

  rep.geodesic_scan_worst = geodesic_concavity_scan(
      u, domain, opts.num_geodesics, opts.num_t, opts.seed + 4);

  rep.gradient_norm_excess_at_argmin = gradient_norm_excess(u, rep.argmin);

  rep.verdict = rep.f_hypotheses.all_pass() && rep.b_hypotheses.all_pass() &&
                rep.min_z >= -rep.tolerance && rep.boundary_margin_min > 0.0 &&
                rep.geodesic_scan_worst <= rep.tolerance;
  return rep;
}

double grid_tolerance(const CapDomain& domain, int Nr, int Ntheta) {
  PolarGrid g{Nr, Ntheta, domain.radius()};
  const ManufacturedCase mc = manufactured_case(domain);
  GridField f{g, mc.exact_radial(0.0), Eigen::MatrixXd(Nr, Ntheta)};
  for (int i = 1; i <= Nr; ++i)
    for (int j = 0; j < Ntheta; ++j)
      f.rings(i - 1, j) = mc.exact_radial(i * g.hr());
  Rng rng(12345);
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const SpherePoint x = domain.sample_interior(rng);
    worst = std::max(worst,
                     std::abs(interpolate_value(f, domain, x) - mc.exact(x)));
  }
  return 10.0 * worst;
}

}  // namespace spherecap
