#include "spherecap/jacobi.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace spherecap;
using testutil::random_pair;
using testutil::random_tangent;

namespace {

// Independent oracle: solve vdot2 = -speed^2 v, v(0)=0, v(2)=1 as a
// finite-difference boundary value problem and read off v at t.
double bvp_oracle_v(double speed, double t, int n = 4000) {
  const double h = 2.0 / n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n - 1, n - 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    A(i, i) = -2.0 / (h * h) + speed * speed;
    if (i > 0) A(i, i - 1) = 1.0 / (h * h);
    if (i < n - 2) A(i, i + 1) = 1.0 / (h * h);
  }
  rhs(n - 2) = -1.0 / (h * h);  // v(2) = 1 boundary value
  const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
  const int k = static_cast<int>(std::round(t / h));
  if (k == 0) return 0.0;
  if (k == n) return 1.0;
  return sol(k - 1);
}

GeodesicSegment segment_with_speed(double speed, Rng& rng) {
  const SpherePoint x = testutil::random_unit(rng);
  const TangentVector d = random_tangent(rng, x);
  const TangentVector scaled(x, (2.0 * speed / d.norm()) * d.vec());
  return geodesic(x, exp_map(scaled));
}

}  // namespace

TEST_CASE("jacobi scalar v") {
  CHECK(jacobi_scalar_v(1e-12, 0.8) == doctest::Approx(0.4).epsilon(1e-12));
  for (double s : {0.1, 0.5, 1.0, 1.4}) {
    CHECK(jacobi_scalar_v(s, 0.0) == 0.0);
    CHECK(jacobi_scalar_v(s, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(jacobi_scalar_v(s, 1.0) ==
          doctest::Approx(1.0 / (2.0 * std::cos(s))).epsilon(1e-14));
    CHECK(jacobi_scalar_v(s, 1.0) >= 0.5);
  }
  CHECK_THROWS_AS(jacobi_scalar_v(1.57, 1.0), ConjugatePointError);
  CHECK_THROWS_AS(jacobi_scalar_v(M_PI / 2, 1.0), ConjugatePointError);
}

TEST_CASE("jacobi scalar v against the FD boundary value oracle") {
  // speed = pi/4: v(1) = 1/(2 cos(pi/4)) = 1/sqrt(2).
  CHECK(bvp_oracle_v(M_PI / 4, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  for (double s : {0.3, 0.9, 1.3}) {
    for (double t : {0.5, 1.0, 1.5}) {
      CHECK(jacobi_scalar_v(s, t) ==
            doctest::Approx(bvp_oracle_v(s, t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("jacobi_bvp closed forms") {
  Rng rng(21);
  const GeodesicSegment seg = segment_with_speed(0.6, rng);
  const ParallelFrame frame(seg);

  SUBCASE("tangential data gives the linear field (1-t)/2 E0") {
    const TangentVector left(seg.x(), frame.vector(0, -1.0));
    const TangentVector right(seg.y(), Vec::Zero(3));
    const JacobiField j = jacobi_bvp(seg, left, right);
    for (double t : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
      CHECK((j.eval(t) - 0.5 * (1.0 - t) * frame.vector(0, t)).norm() <= 1e-13);
    }
  }
  SUBCASE("zero boundary data gives the zero field") {
    const TangentVector z1(seg.x(), Vec::Zero(3));
    const TangentVector z2(seg.y(), Vec::Zero(3));
    const JacobiField j = jacobi_bvp(seg, z1, z2);
    CHECK(j.eval(0.0).norm() == 0.0);
    CHECK(j.eval(0.7).norm() == 0.0);
  }
  SUBCASE("normal data scales by v(1) at the midpoint") {
    const TangentVector left(seg.x(), frame.normal(1));
    const TangentVector right(seg.y(), Vec::Zero(3));
    const JacobiField j = jacobi_bvp(seg, left, right);
    const double v1 = 1.0 / (2.0 * std::cos(seg.speed()));
    CHECK((j.eval(0.0) - v1 * frame.normal(1)).norm() <= 1e-13);
  }
}

TEST_CASE("closed-form fields satisfy the Jacobi equation") {
  Rng rng(22);
  for (int k = 0; k < 5; ++k) {
    const auto [x, y] = random_pair(rng);
    const GeodesicSegment seg = geodesic(x, y);
    if (seg.speed() < 0.05) continue;
    const JacobiField j =
        jacobi_bvp(seg, random_tangent(rng, x), random_tangent(rng, y));
    const ParallelFrame frame(seg);
    const double sp = seg.speed();
    const double h = 1e-4;
    for (double t : {-0.6, 0.0, 0.4}) {
      // D_t^2 J via second differences of the parallel-frame coefficients.
      Vec d2(3);
      d2.setZero();
      for (int i = 0; i < frame.count(); ++i) {
        const double cm = j.eval(t - h).dot(frame.vector(i, t - h));
        const double c0 = j.eval(t).dot(frame.vector(i, t));
        const double cp = j.eval(t + h).dot(frame.vector(i, t + h));
        d2 += ((cp - 2.0 * c0 + cm) / (h * h)) * frame.vector(i, t);
      }
      const Vec gdot = sp * seg.unit_tangent(t);
      const Vec J = j.eval(t);
      const Vec residual = d2 + sp * sp * J - gdot.dot(J) * gdot;
      CHECK(residual.norm() <= 1e-5);
    }
  }
}

TEST_CASE("fd_jacobi_oracle agrees with jacobi_bvp") {
  Rng rng(23);
  std::vector<double> ts;
  for (int i = 0; i <= 8; ++i) ts.push_back(-1.0 + 0.25 * i);
  for (int k = 0; k < 10; ++k) {
    const auto [x, y] = random_pair(rng);
    const GeodesicSegment seg = geodesic(x, y);
    if (seg.speed() < 0.05) continue;
    const TangentVector dir = random_tangent(rng, x);
    const TangentVector zero(y, Vec::Zero(3));
    const JacobiField j = jacobi_bvp(seg, dir, zero);
    const auto oracle = fd_jacobi_oracle(x, y, dir, Endpoint::X, 1e-5, ts);
    for (size_t i = 0; i < ts.size(); ++i) {
      CHECK((j.eval(ts[i]) - oracle[i]).norm() <= 1e-6);
    }
  }
}

TEST_CASE("fd_jacobi_oracle edge cases") {
  Rng rng(24);
  const auto [x, y] = random_pair(rng);
  const std::vector<double> ts{-1.0, 0.0, 1.0};
  SUBCASE("zero direction gives the zero field") {
    const auto oracle = fd_jacobi_oracle(
        x, y, TangentVector(x, Vec::Zero(3)), Endpoint::X, 1e-5, ts);
    for (const Vec& v : oracle) CHECK(v.norm() <= 1e-12);
  }
  SUBCASE("step is validated") {
    CHECK_THROWS_AS(fd_jacobi_oracle(x, y, TangentVector(x, Vec::Zero(3)),
                                     Endpoint::X, 0.5, ts),
                    GeometryError);
  }
}

TEST_CASE("K identities on a random segment") {
  Rng rng(25);
  const GeodesicSegment seg = segment_with_speed(0.8, rng);
  Vec xi(1);
  xi << 1.0;
  const KIdentityReport rep = check_k_identities(seg, xi, 1e-3);
  CHECK(rep.k1_sup <= 1e-4);
  CHECK(rep.k00_sup <= 1e-4);
  CHECK(rep.k2_at_zero <= 1e-4);
  CHECK(rep.k3_at_zero <= 1e-4);
  CHECK(rep.k_boundary_max <= 1e-5);
  CHECK(rep.evk_residual_max <= 1e-4);
  // Lemma is about t = 0 only; away from 0 the K2 combination is nonzero.
  CHECK(rep.k2_mid_sample > 1e-3);
}

TEST_CASE("K identities flat limit") {
  Rng rng(26);
  const GeodesicSegment seg = segment_with_speed(5e-4, rng);
  Vec xi(1);
  xi << 1.0;
  // Wider step: with near-zero curvature the truncation term vanishes and a
  // small step only amplifies rounding noise.
  const KIdentityReport rep = check_k_identities(seg, xi, 1e-2);
  CHECK(rep.k1_sup <= 1e-8);
  CHECK(rep.k00_sup <= 1e-8);
  CHECK(rep.k2_at_zero <= 1e-8);
  CHECK(rep.k3_at_zero <= 1e-8);
}
