#include "spherecap/operators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace spherecap {

double ScalarFn::operator()(double x) const {
  if (name == "identity") return x;
  if (name == "exp") return std::exp(x);
  if (name == "power") return std::pow(x, exponent);
  if (custom) return custom(x);
  throw SpectralError("ScalarFn: unknown function '" + name + "'");
}

ScalarFn ScalarFn::identity() { return {"identity", 1.0, {}}; }
ScalarFn ScalarFn::exponential() { return {"exp", 1.0, {}}; }
ScalarFn ScalarFn::power(double p) { return {"power", p, {}}; }
ScalarFn ScalarFn::make_custom(std::string name,
                               std::function<double(double)> fn) {
  return {std::move(name), 1.0, std::move(fn)};
}

double eval_f(const IsotropicOperator& op, double p, const SymmetricMatrix& W) {
  const Spectrum sp = eigen_sym(W);
  if (op.cone == Cone::Positive && sp.eigenvalues.minCoeff() < -1e-12) {
    throw ConeError("eval_f: spectrum outside the positive cone");
  }
  double sum = op.phi(p);
  for (int i = 0; i < sp.eigenvalues.size(); ++i) sum += op.psi(sp.eigenvalues(i));
  return sum;
}

double RHSSpec::c_radial(double r) const {
  switch (c_kind) {
    case CFormKind::Constant:
      return k;
    case CFormKind::CosDist:
      return bcos * std::cos(r) + k;
    case CFormKind::ExpCos:
      return a * std::exp(std::cos(r)) + bcos * std::cos(r) + k;
  }
  throw std::logic_error("RHSSpec: bad kind");
}

double eval_b(const RHSSpec& rhs, const SpherePoint& x, double u, double p) {
  return rhs.c(x) - rhs.lambda * u - rhs.mu * p;
}

double eval_b_radial(const RHSSpec& rhs, double r, double u, double p) {
  return rhs.c_radial(r) - rhs.lambda * u - rhs.mu * p;
}

bool HypothesisReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

std::string witness_str(int trial, double value) {
  std::ostringstream os;
  os << "trial " << trial << ", violation " << value;
  return os.str();
}

// Scaled so spectra stay O(1); keeps exp-type operators well conditioned.
Eigen::MatrixXd random_symmetric(Rng& rng, int dim) {
  Eigen::MatrixXd A(dim, dim);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = s * rng.normal();
  return A;
}

Eigen::MatrixXd random_in_cone(Rng& rng, int dim, Cone cone) {
  Eigen::MatrixXd A = random_symmetric(rng, dim);
  if (cone == Cone::Positive) return (A.transpose() * A).eval();
  return A;
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int dim) {
  Eigen::MatrixXd A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

struct RunningWorst {
  double worst = -std::numeric_limits<double>::infinity();
  int trial = -1;
  void update(double v, int k) {
    if (v > worst) {
      worst = v;
      trial = k;
    }
  }
  HypothesisCheck finish(const std::string& name, double tol) const {
    return {name, worst <= tol, worst, witness_str(trial, worst)};
  }
};

}  // namespace

HypothesisReport check_f_hypotheses(const IsotropicOperator& op, int trials,
                                    std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_f_hypotheses: trials < 1");
  Rng master(seed);
  RunningWorst mono_p, eig_mono, convex, isotropy;
  for (int k = 0; k < trials; ++k) {
    Rng rng = master.substream(k);
    const int dim = 2 + static_cast<int>(rng.uniform() * 4.0);  // 2..5

    const SymmetricMatrix W(random_in_cone(rng, dim, op.cone));
    double p = std::abs(rng.normal());
    double q = p + std::abs(rng.normal());
    mono_p.update(eval_f(op, p, W) - eval_f(op, q, W), k);

    // Eigenvalue monotonicity on ordered diagonal pairs.
    Eigen::VectorXd kap(dim), lam(dim);
    for (int i = 0; i < dim; ++i) {
      kap(i) = (op.cone == Cone::Positive) ? std::abs(rng.normal())
                                           : rng.normal();
      lam(i) = kap(i) + std::abs(rng.normal());
    }
    const SymmetricMatrix Dk(Eigen::MatrixXd(kap.asDiagonal()));
    const SymmetricMatrix Dl(Eigen::MatrixXd(lam.asDiagonal()));
    eig_mono.update(eval_f(op, p, Dk) - eval_f(op, p, Dl), k);

    const SymmetricMatrix A(random_in_cone(rng, dim, op.cone));
    const SymmetricMatrix B(random_in_cone(rng, dim, op.cone));
    const SymmetricMatrix M(0.5 * (A.entries() + B.entries()));
    convex.update(
        eval_f(op, p, M) - 0.5 * (eval_f(op, p, A) + eval_f(op, p, B)), k);

    const Eigen::MatrixXd Q = random_orthogonal(rng, dim);
    const SymmetricMatrix WQ(Q * W.entries() * Q.transpose());
    isotropy.update(std::abs(eval_f(op, p, WQ) - eval_f(op, p, W)), k);
  }
  HypothesisReport rep;
  rep.checks.push_back(mono_p.finish("f_monotone_in_p", 1e-12));
  rep.checks.push_back(eig_mono.finish("f_eigenvalue_monotone", 1e-12));
  rep.checks.push_back(convex.finish("f_midpoint_convex", 1e-12));
  rep.checks.push_back(isotropy.finish("f_isotropy", 1e-10));
  return rep;
}

HypothesisReport check_b_hypotheses(const RHSSpec& rhs, const CapDomain& domain,
                                    int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_b_hypotheses: trials < 1");
  Rng master(seed);
  RunningWorst concave, dec_u, dec_p;
  for (int k = 0; k < trials; ++k) {
    Rng rng = master.substream(k);
    const SpherePoint x = domain.sample_interior(rng);
    const SpherePoint y = domain.sample_interior(rng);
    const SpherePoint z = midpoint(x, y);
    const double u1 = rng.uniform(-1.0, 1.0);
    const double u2 = rng.uniform(-1.0, 1.0);
    const double p = std::abs(rng.normal());

    // Joint midpoint concavity in (x, u), exactly as hypothesized.
    concave.update(0.5 * (eval_b(rhs, x, u1, p) + eval_b(rhs, y, u2, p)) -
                       eval_b(rhs, z, 0.5 * (u1 + u2), p),
                   k);

    const double lo = std::min(u1, u2) - 1e-3;
    const double hi = std::max(u1, u2) + 1e-3;
    dec_u.update(eval_b(rhs, x, hi, p) - eval_b(rhs, x, lo, p), k);

    const double dp = std::abs(rng.normal());
    dec_p.update(eval_b(rhs, x, u1, p + dp) - eval_b(rhs, x, u1, p), k);
  }
  HypothesisReport rep;
  rep.checks.push_back(concave.finish("b_midpoint_concave", 1e-12));
  // Strict decrease in u: the worst difference must be genuinely negative.
  HypothesisCheck strict = dec_u.finish("b_strictly_decreasing_in_u", 0.0);
  strict.pass = strict.worst_violation < 0.0;
  rep.checks.push_back(strict);
  rep.checks.push_back(dec_p.finish("b_decreasing_in_p", 1e-15));
  return rep;
}

}  // namespace spherecap
