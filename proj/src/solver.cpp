#include "spherecap/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>

namespace spherecap {

namespace {

void require_grid(const PolarGrid& g) {
  if (g.Nr < 8 || g.Ntheta < 8) throw SolverError("grid too coarse (min 8)");
  if (!(g.R > 0.0 && g.R < 1.5707963267948966)) {
    throw SolverError("cap radius outside (0, pi/2)");
  }
}

// Gradient magnitude at the nodes by centered differences (used only when the
// right-hand side carries a |grad u| term).
Eigen::MatrixXd nodal_gradient_norm(const GridField& u, double& pole_norm) {
  const PolarGrid& g = u.grid;
  const double h = g.hr();
  const double ht = g.htheta();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.Nr, g.Ntheta);
  for (int i = 1; i < g.Nr; ++i) {
    const double r = i * h;
    for (int j = 0; j < g.Ntheta; ++j) {
      const int jp = (j + 1) % g.Ntheta;
      const int jm = (j + g.Ntheta - 1) % g.Ntheta;
      const double ur = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * h);
      const double ut = (u.at(i, jp) - u.at(i, jm)) / (2.0 * ht);
      out(i - 1, j) = std::hypot(ur, ut / std::sin(r));
    }
  }
  double gx = 0.0, gy = 0.0;
  for (int j = 0; j < g.Ntheta; ++j) {
    gx += u.at(1, j) * std::cos(j * ht);
    gy += u.at(1, j) * std::sin(j * ht);
  }
  pole_norm = 2.0 * std::hypot(gx, gy) / (g.Ntheta * h);
  return out;
}

}  // namespace

GridField discrete_laplacian(const GridField& u) {
  require_grid(u.grid);
  const PolarGrid& g = u.grid;
  const double h = g.hr();
  const double ht = g.htheta();
  GridField out{g, 0.0, Eigen::MatrixXd::Zero(g.Nr, g.Ntheta)};

  double ring_mean = 0.0;
  for (int j = 0; j < g.Ntheta; ++j) ring_mean += u.at(1, j);
  ring_mean /= g.Ntheta;
  out.pole_value = 4.0 * (ring_mean - u.pole_value) / (h * h);

  for (int i = 1; i < g.Nr; ++i) {
    const double r = i * h;
    const double cot = std::cos(r) / std::sin(r);
    const double isin2 = 1.0 / (std::sin(r) * std::sin(r));
    for (int j = 0; j < g.Ntheta; ++j) {
      const int jp = (j + 1) % g.Ntheta;
      const int jm = (j + g.Ntheta - 1) % g.Ntheta;
      const double urr =
          (u.at(i + 1, j) - 2.0 * u.at(i, j) + u.at(i - 1, j)) / (h * h);
      const double ur = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * h);
      const double utt =
          (u.at(i, jp) - 2.0 * u.at(i, j) + u.at(i, jm)) / (ht * ht);
      out.rings(i - 1, j) = urr + cot * ur + isin2 * utt;
    }
  }
  return out;
}

SpherePoint grid_node(const PolarGrid& grid, const CapDomain& domain, int i,
                      int j) {
  return domain.from_polar(i * grid.hr(), j * grid.htheta());
}

GridField solve_semilinear(const SolverConfig& config, SolveLog* log) {
  if (config.mode != SolverMode::Semilinear2D) {
    throw SolverError("solve_semilinear: wrong mode");
  }
  if (!(config.rhs.lambda > 0.0)) {
    throw SolverError("solve_semilinear: rhs.lambda must be > 0");
  }
  if (config.op.psi.name != "identity" || config.op.phi_slope != 0.0) {
    throw SolverError("solve_semilinear: semilinear mode requires f = -Delta");
  }
  PolarGrid grid{config.Nr, config.Ntheta, config.domain.radius()};
  require_grid(grid);
  const int Nr = grid.Nr, Nt = grid.Ntheta;
  const double h = grid.hr(), ht = grid.htheta();
  const int nunk = 1 + (Nr - 1) * Nt;
  auto idx = [&](int i, int j) { return i == 0 ? 0 : 1 + (i - 1) * Nt + j; };

  // c(x) at the unknown nodes.
  Eigen::VectorXd cvals(nunk);
  cvals(0) = config.rhs.c_radial(0.0);
  for (int i = 1; i < Nr; ++i)
    for (int j = 0; j < Nt; ++j)
      cvals(idx(i, j)) = config.rhs.c_radial(i * h);

  // Newton matrix -Delta_h + lambda I (constant).
  std::vector<Eigen::Triplet<double>> trip;
  trip.emplace_back(0, 0, 4.0 / (h * h) + config.rhs.lambda);
  for (int j = 0; j < Nt; ++j)
    trip.emplace_back(0, idx(1, j), -4.0 / (h * h) / Nt);
  for (int i = 1; i < Nr; ++i) {
    const double r = i * h;
    const double cot = std::cos(r) / std::sin(r);
    const double isin2 = 1.0 / (std::sin(r) * std::sin(r));
    const double cr_p = 1.0 / (h * h) + cot / (2.0 * h);
    const double cr_m = 1.0 / (h * h) - cot / (2.0 * h);
    const double cth = isin2 / (ht * ht);
    for (int j = 0; j < Nt; ++j) {
      const int row = idx(i, j);
      trip.emplace_back(row, row,
                        2.0 / (h * h) + 2.0 * cth + config.rhs.lambda);
      trip.emplace_back(row, idx(i, (j + 1) % Nt), -cth);
      trip.emplace_back(row, idx(i, (j + Nt - 1) % Nt), -cth);
      trip.emplace_back(row, idx(i - 1, j == 0 ? 0 : j), -cr_m);
      if (i + 1 < Nr) trip.emplace_back(row, idx(i + 1, j), -cr_p);
      // i+1 == Nr: boundary value is 0 (homogeneous Dirichlet).
    }
  }
  Eigen::SparseMatrix<double> J(nunk, nunk);
  J.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success) throw SolverError("sparse factorization failed");

  auto unpack = [&](const Eigen::VectorXd& v) {
    GridField f{grid, v(0), Eigen::MatrixXd::Zero(Nr, Nt)};
    for (int i = 1; i < Nr; ++i)
      for (int j = 0; j < Nt; ++j) f.rings(i - 1, j) = v(idx(i, j));
    return f;
  };

  auto residual = [&](const Eigen::VectorXd& v) {
    GridField f = unpack(v);
    GridField lap = discrete_laplacian(f);
    Eigen::VectorXd F(nunk);
    double pole_p = 0.0;
    Eigen::MatrixXd p;
    if (config.rhs.mu != 0.0) p = nodal_gradient_norm(f, pole_p);
    F(0) = -lap.pole_value - cvals(0) + config.rhs.lambda * v(0) +
           config.rhs.mu * pole_p;
    for (int i = 1; i < Nr; ++i)
      for (int j = 0; j < Nt; ++j) {
        const int row = idx(i, j);
        const double pij = (config.rhs.mu != 0.0) ? p(i - 1, j) : 0.0;
        F(row) = -lap.rings(i - 1, j) - cvals(row) +
                 config.rhs.lambda * v(row) + config.rhs.mu * pij;
      }
    return F;
  };

  Eigen::VectorXd u = Eigen::VectorXd::Zero(nunk);
  Eigen::VectorXd F = residual(u);
  double res = F.lpNorm<Eigen::Infinity>();
  int iter = 0;
  while (res > config.tol_residual) {
    if (iter >= config.max_iter) throw MaxIterError(res);
    if (!F.allFinite()) throw SolverError("non-finite residual");
    Eigen::VectorXd step = lu.solve(-F);
    double alpha = 1.0;
    Eigen::VectorXd u_try;
    Eigen::VectorXd F_try;
    double res_try;
    for (;;) {
      u_try = u + alpha * step;
      F_try = residual(u_try);
      res_try = F_try.lpNorm<Eigen::Infinity>();
      if (res_try < res || alpha <= 1.0 / 64.0) break;
      alpha *= 0.5;
    }
    u = u_try;
    F = F_try;
    res = res_try;
    ++iter;
  }
  if (log) {
    log->iterations = iter;
    log->final_residual = res;
  }
  return unpack(u);
}

namespace {

// Single-level damped Newton for the radial problem with nr interior-plus-pole
// unknowns u_0..u_{nr-1} and u_nr = 0 (Dirichlet). The line search only ever
// accepts a strict decrease of the residual norm.
Eigen::VectorXd radial_newton(const SolverConfig& config, int nr,
                              Eigen::VectorXd u, SolveLog* log) {
  const double h = config.domain.radius() / nr;
  const auto& psi = config.op.psi;

  auto hess_eig_check = [&](double e1, double e2) {
    if (config.op.cone == Cone::Positive && (e1 < -1e-12 || e2 < -1e-12)) {
      throw ConeError("radial solve: Hessian spectrum left the positive cone");
    }
  };

  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd F(nr);
    auto uat = [&](int i) { return i == nr ? 0.0 : v(i); };
    {
      // Pole: both principal curvatures of the radial Hessian tend to u''(0).
      const double upp0 = 2.0 * (uat(1) - uat(0)) / (h * h);
      hess_eig_check(-upp0, -upp0);
      F(0) = config.op.phi(0.0) + 2.0 * psi(-upp0) -
             eval_b_radial(config.rhs, 0.0, uat(0), 0.0);
    }
    for (int i = 1; i < nr; ++i) {
      const double r = i * h;
      const double up = (uat(i + 1) - uat(i - 1)) / (2.0 * h);
      const double upp = (uat(i + 1) - 2.0 * uat(i) + uat(i - 1)) / (h * h);
      const double cot = std::cos(r) / std::sin(r);
      const double p = std::abs(up);
      hess_eig_check(-upp, -cot * up);
      F(i) = config.op.phi(p) + psi(-upp) + psi(-cot * up) -
             eval_b_radial(config.rhs, r, uat(i), p);
    }
    return F;
  };

  // Scalar derivative of psi by central difference; entrywise FD of the full
  // residual is useless here because its O(fd) error gets amplified by the
  // 1/h^2 conditioning of the linearized operator.
  auto dpsi = [&](double x) {
    const double e = 1e-6 * std::max(1.0, std::abs(x));
    return (psi(x + e) - psi(x - e)) / (2.0 * e);
  };

  // Analytic tridiagonal Jacobian of the residual.
  auto jacobian = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nr, nr);
    auto uat = [&](int i) { return i == nr ? 0.0 : v(i); };
    const double lambda = config.rhs.lambda;
    const double mu = config.rhs.mu;
    const double slope = config.op.phi_slope;
    {
      const double upp0 = 2.0 * (uat(1) - uat(0)) / (h * h);
      const double d0 = 2.0 * dpsi(-upp0) * (2.0 / (h * h));
      J(0, 0) = d0 + lambda;
      J(0, 1) = -d0;
    }
    for (int i = 1; i < nr; ++i) {
      const double r = i * h;
      const double up = (uat(i + 1) - uat(i - 1)) / (2.0 * h);
      const double upp = (uat(i + 1) - 2.0 * uat(i) + uat(i - 1)) / (h * h);
      const double cot = std::cos(r) / std::sin(r);
      const double d1 = dpsi(-upp);
      const double d2 = dpsi(-cot * up);
      const double sgn = up > 0.0 ? 1.0 : (up < 0.0 ? -1.0 : 0.0);
      // phi(p) - b carries (slope + mu) * |u'|.
      const double dp = (slope + mu) * sgn / (2.0 * h);
      J(i, i) = 2.0 * d1 / (h * h) + lambda;
      if (i + 1 < nr) {
        J(i, i + 1) = -d1 / (h * h) - d2 * cot / (2.0 * h) + dp;
      }
      J(i, i - 1) = -d1 / (h * h) + d2 * cot / (2.0 * h) - dp;
    }
    return J;
  };

  Eigen::VectorXd F = residual(u);
  double res = F.lpNorm<Eigen::Infinity>();
  double merit = F.norm();  // 2-norm merit for the line search
  int iter = 0;
  while (res > config.tol_residual) {
    if (iter >= config.max_iter) throw MaxIterError(res);
    if (!F.allFinite()) throw SolverError("non-finite residual");
    Eigen::VectorXd step = jacobian(u).partialPivLu().solve(-F);
    double alpha = 1.0;
    bool improved = false;
    Eigen::VectorXd u_try, F_try;
    double merit_try = merit;
    while (alpha > 1e-12) {
      u_try = u + alpha * step;
      F_try = residual(u_try);
      merit_try = F_try.norm();
      if (std::isfinite(merit_try) && merit_try < merit) {
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) throw MaxIterError(res);
    u = u_try;
    F = F_try;
    merit = merit_try;
    res = F.lpNorm<Eigen::Infinity>();
    ++iter;
  }
  if (log) {
    log->iterations += iter;
    log->final_residual = res;
  }
  return u;
}

}  // namespace

RadialField solve_radial_fully_nonlinear(const SolverConfig& config,
                                         SolveLog* log) {
  if (config.mode != SolverMode::RadialFullyNonlinear1D) {
    throw SolverError("solve_radial_fully_nonlinear: wrong mode");
  }
  const double R = config.domain.radius();
  const int Nr = config.Nr;
  if (Nr < 8) throw SolverError("grid too coarse (min 8)");
  if (!(R > 0.0 && R < 1.5707963267948966)) {
    throw SolverError("cap radius outside (0, pi/2)");
  }

  // Grid continuation: solve coarse levels first and refine the guess by
  // linear interpolation. Full Newton from zero creeps for stiff operators.
  std::vector<int> levels{Nr};
  while (levels.back() % 2 == 0 && levels.back() / 2 >= 16) {
    levels.push_back(levels.back() / 2);
  }
  if (log) {
    log->iterations = 0;
    log->final_residual = 0.0;
  }
  Eigen::VectorXd u;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const int nr = *it;
    Eigen::VectorXd guess = Eigen::VectorXd::Zero(nr);
    if (u.size() > 0) {
      // The previous level holds nr/2 unknowns; node nr/2 is the boundary 0.
      for (int i = 0; i < nr; ++i) {
        const double pos = 0.5 * i;
        const int i0 = static_cast<int>(pos);
        const double f = pos - i0;
        const double lo = u(i0);
        const double hi = (i0 + 1 < u.size()) ? u(i0 + 1) : 0.0;
        guess(i) = (1.0 - f) * lo + f * hi;
      }
    }
    u = radial_newton(config, nr, std::move(guess), log);
  }
  RadialField out;
  out.R = R;
  out.values = Eigen::VectorXd(Nr + 1);
  out.values.head(Nr) = u;
  out.values(Nr) = 0.0;
  return out;
}

ManufacturedCase manufactured_case(const CapDomain& domain) {
  const double R = domain.radius();
  RHSSpec rhs;
  rhs.c_kind = CFormKind::CosDist;
  rhs.bcos = 3.0;
  rhs.k = -std::cos(R);
  rhs.pole = domain.pole();
  rhs.lambda = 1.0;
  rhs.mu = 0.0;
  const SpherePoint pole = domain.pole();
  ManufacturedCase mc{rhs,
                      [pole, R](const SpherePoint& x) {
                        return std::cos(distance(pole, x)) - std::cos(R);
                      },
                      [R](double r) { return std::cos(r) - std::cos(R); }};
  return mc;
}

namespace {

// Interpolant in polar coordinates; r < 0 reflects through the pole.
double interp_polar(const GridField& u, double r, double theta) {
  const PolarGrid& g = u.grid;
  if (r < 0.0) {
    r = -r;
    theta += 3.141592653589793;
  }
  const double h = g.hr(), ht = g.htheta();
  if (r > g.R + 1e-9) throw GeometryError("interpolate: point outside cap");
  r = std::min(r, g.R);
  int i = std::min(static_cast<int>(r / h), g.Nr - 1);
  const double fr = r / h - i;
  theta = std::fmod(theta, 6.283185307179586);
  if (theta < 0.0) theta += 6.283185307179586;
  int j = std::min(static_cast<int>(theta / ht), g.Ntheta - 1);
  const double ft = theta / ht - j;
  const int jp = (j + 1) % g.Ntheta;
  const double lo = (1.0 - ft) * u.at(i, j) + ft * u.at(i, jp);
  const double hi = (1.0 - ft) * u.at(i + 1, j) + ft * u.at(i + 1, jp);
  return (1.0 - fr) * lo + fr * hi;
}

}  // namespace

double interpolate_value(const GridField& u, const CapDomain& domain,
                         const SpherePoint& x) {
  const auto [r, theta] = domain.polar(x);
  return interp_polar(u, r, theta);
}

TangentVector interpolate_gradient(const GridField& u, const CapDomain& domain,
                                   const SpherePoint& x) {
  const PolarGrid& g = u.grid;
  const double h = g.hr(), ht = g.htheta();
  const auto [r, theta] = domain.polar(x);
  if (r > g.R + 1e-9) throw GeometryError("interpolate: point outside cap");

  // Step-h centered differences of the interpolant are O(h^2) consistent;
  // one-sided second order at the rim.
  double ur;
  if (r + h <= g.R) {
    ur = (interp_polar(u, r + h, theta) - interp_polar(u, r - h, theta)) /
         (2.0 * h);
  } else {
    ur = (3.0 * interp_polar(u, r, theta) - 4.0 * interp_polar(u, r - h, theta) +
          interp_polar(u, r - 2.0 * h, theta)) /
         (2.0 * h);
  }

  const Vec& p = domain.pole().coords();
  if (r < 1e-6) {
    // At the pole express the gradient in the pole axes.
    const double ga =
        (interp_polar(u, h, 0.0) - interp_polar(u, h, 3.141592653589793)) /
        (2.0 * h);
    const double gb = (interp_polar(u, h, 1.5707963267948966) -
                       interp_polar(u, h, 4.71238898038469)) /
                      (2.0 * h);
    Vec grad = ga * domain.axis1() + gb * domain.axis2();
    grad -= grad.dot(x.coords()) * x.coords();
    return TangentVector(x, std::move(grad));
  }

  const double ut =
      (interp_polar(u, r, theta + ht) - interp_polar(u, r, theta - ht)) /
      (2.0 * ht);
  Vec dirv = (x.coords() - std::cos(r) * p) / std::sin(r);
  Vec e_r = -std::sin(r) * p + std::cos(r) * dirv;
  Vec e_t = -std::sin(theta) * domain.axis1() + std::cos(theta) * domain.axis2();
  Vec grad = ur * e_r + (ut / std::sin(r)) * e_t;
  grad -= grad.dot(x.coords()) * x.coords();
  return TangentVector(x, std::move(grad));
}

}  // namespace spherecap
