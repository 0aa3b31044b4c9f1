#include "spherecap/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace spherecap;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

CapDomain unit_cap() { return CapDomain(SpherePoint(v3(0, 0, 1)), 1.0); }

}  // namespace

TEST_CASE("CosDistField values and gradients") {
  const SpherePoint pole(v3(0, 0, 1));
  const CosDistField u(pole, 1.0, -0.5);
  CHECK(u.value(pole) == doctest::Approx(0.5).epsilon(1e-15));
  const SpherePoint x(v3(std::sin(0.4), 0.0, std::cos(0.4)));
  CHECK(u.value(x) == doctest::Approx(std::cos(0.4) - 0.5).epsilon(1e-14));
  const TangentVector g = u.gradient(x);
  // Gradient of cos d has norm sin d and points toward the pole.
  CHECK(g.norm() == doctest::Approx(std::sin(0.4)).epsilon(1e-12));
  CHECK(g.vec().normalized().isApprox(log_map(x, pole).vec().normalized(),
                                      1e-10));
}

TEST_CASE("two_point_z") {
  const SpherePoint pole(v3(0, 0, 1));
  const CosDistField u(pole, 1.0, 0.0);
  const SpherePoint x(v3(std::sin(0.6), 0.0, std::cos(0.6)));
  const SpherePoint y(v3(-std::sin(0.6), 0.0, std::cos(0.6)));
  // Midpoint is the pole: Z = 1 - cos 0.6 > 0.
  CHECK(two_point_z(u, x, y) ==
        doctest::Approx(1.0 - std::cos(0.6)).epsilon(1e-13));
  CHECK(two_point_z(u, x, x) == 0.0);
  CHECK(two_point_z(u, x, y) == two_point_z(u, y, x));  // exact symmetry
}

TEST_CASE("scan_z_min") {
  const CapDomain cap = unit_cap();
  SUBCASE("concave field has nonnegative minimum") {
    const CosDistField u(cap.pole(), 1.0, -std::cos(1.0));
    const ZScanResult res = scan_z_min(u, cap, 20000, 5);
    CHECK(res.num_pairs >= 20000);
    CHECK(res.min_z >= -1e-14);
  }
  SUBCASE("convex field is caught with a witness") {
    const CosDistField u(cap.pole(), -1.0, 0.0);
    const ZScanResult res = scan_z_min(u, cap, 20000, 5);
    CHECK(res.min_z < -1e-4);
    // Witness pair reproduces the reported value.
    const double z = two_point_z(u, SpherePoint(res.argmin.x),
                                 SpherePoint(res.argmin.y));
    CHECK(z == doctest::Approx(res.min_z).epsilon(1e-12));
  }
  SUBCASE("deterministic in the seed") {
    const CosDistField u(cap.pole(), 1.0, 0.0);
    const ZScanResult a = scan_z_min(u, cap, 5000, 9);
    const ZScanResult b = scan_z_min(u, cap, 5000, 9);
    CHECK(a.min_z == b.min_z);
    CHECK(a.argmin.x == b.argmin.x);
  }
}

TEST_CASE("boundary margin") {
  const CapDomain cap = unit_cap();
  SUBCASE("positive for the concave model field") {
    const CosDistField u(cap.pole(), 1.0, 0.0);
    const BoundaryMarginResult res = boundary_margin(u, cap, 64, 8, 3);
    CHECK(res.min_margin > 0.0);
  }
  SUBCASE("negative for the convex model field") {
    const CosDistField u(cap.pole(), -1.0, 0.0);
    const BoundaryMarginResult res = boundary_margin(u, cap, 64, 8, 3);
    CHECK(res.min_margin < 0.0);
  }
  SUBCASE("near-coincident pairs are excluded") {
    const CosDistField u(cap.pole(), 1.0, 0.0);
    const BoundaryMarginResult res = boundary_margin(u, cap, 64, 8, 3);
    const double d = distance(SpherePoint(res.witness_x),
                              SpherePoint(res.witness_y));
    CHECK(d >= res.excluded_distance);
  }
}

TEST_CASE("geodesic concavity scan") {
  const CapDomain cap = unit_cap();
  const CosDistField concave(cap.pole(), 1.0, 0.0);
  CHECK(geodesic_concavity_scan(concave, cap, 200, 21, 7) <= 1e-12);
  const CosDistField convex(cap.pole(), -1.0, 0.0);
  CHECK(geodesic_concavity_scan(convex, cap, 200, 21, 7) > 1e-5);
}

TEST_CASE("gradient norm excess") {
  const CapDomain cap = unit_cap();
  const CosDistField u(cap.pole(), 1.0, 0.0);
  PairSample pair;
  pair.x = v3(std::sin(0.5), 0, std::cos(0.5));
  pair.y = v3(-std::sin(0.5), 0, std::cos(0.5));
  pair.z = midpoint(SpherePoint(pair.x), SpherePoint(pair.y)).coords();
  // Midpoint is the pole where the gradient vanishes; both endpoints have
  // norm sin(0.5).
  CHECK(gradient_norm_excess(u, pair) ==
        doctest::Approx(-std::sin(0.5)).epsilon(1e-12));
}

TEST_CASE("full report") {
  const CapDomain cap = unit_cap();
  const IsotropicOperator op{ScalarFn::identity(), 0.0, Cone::All};
  RHSSpec rhs;
  rhs.c_kind = CFormKind::CosDist;
  rhs.bcos = 3.0;
  rhs.k = -std::cos(1.0);
  rhs.lambda = 1.0;

  VerifyOptions opts;
  opts.num_pairs = 20000;
  opts.num_geodesics = 200;
  opts.num_boundary = 64;
  opts.hypothesis_trials = 300;

  SUBCASE("concave exact solution passes") {
    const CosDistField u(cap.pole(), 1.0, -std::cos(1.0));
    const ConcavityReport rep = full_report(u, cap, op, rhs, opts);
    CHECK(rep.verdict);
    CHECK(rep.min_z >= -opts.tolerance);
    CHECK(rep.boundary_margin_min > 0.0);
    CHECK(rep.geodesic_scan_worst <= opts.tolerance);
    CHECK(rep.f_hypotheses.all_pass());
    CHECK(rep.b_hypotheses.all_pass());
    CHECK(rep.gradient_norm_excess_at_argmin <= 1e-8);
  }
  SUBCASE("convex field fails") {
    const CosDistField u(cap.pole(), -1.0, 0.0);
    CHECK_FALSE(full_report(u, cap, op, rhs, opts).verdict);
  }
  SUBCASE("bad right-hand side fails even with a concave field") {
    RHSSpec bad = rhs;
    bad.lambda = 0.0;  // strict decrease in u is lost
    const CosDistField u(cap.pole(), 1.0, -std::cos(1.0));
    CHECK_FALSE(full_report(u, cap, op, bad, opts).verdict);
  }
}

TEST_CASE("grid tolerance tracks the resolution") {
  const CapDomain cap = unit_cap();
  const double t64 = grid_tolerance(cap, 64, 64);
  const double t128 = grid_tolerance(cap, 128, 128);
  CHECK(t64 > 0.0);
  CHECK(t128 > 0.0);
  CHECK(t128 < t64);  // finer grid, smaller declared tolerance
  CHECK(t64 < 1e-2);
}
