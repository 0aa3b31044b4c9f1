#include "spherecap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace spherecap {

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw SpectralError("SymmetricMatrix: not square");
  }
  if (m_.rows() > 64) {
    throw SpectralError("SymmetricMatrix: dim > 64");
  }
  if (!m_.allFinite()) {
    throw SpectralError("SymmetricMatrix: non-finite entries");
  }
  m_ = 0.5 * (m_ + m_.transpose()).eval();
}

Spectrum eigen_sym(const SymmetricMatrix& W) {
  const int n = W.dim();
  Eigen::MatrixXd A = W.entries();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());

  for (int sweep = 0; sweep < 30; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(off) <= 1e-13 * scale) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- G^T A G with the Givens rotation in the (p,q) plane.
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double qkp = Q(k, p), qkq = Q(k, q);
          Q(k, p) = c * qkp - s * qkq;
          Q(k, q) = s * qkp + c * qkq;
        }
      }
    }
  }

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return A(a, a) < A(b, b); });
  Spectrum sp;
  sp.eigenvalues = Eigen::VectorXd(n);
  sp.eigenvectors = Eigen::MatrixXd(n, n);
  for (int k = 0; k < n; ++k) {
    sp.eigenvalues(k) = A(idx[k], idx[k]);
    sp.eigenvectors.col(k) = Q.col(idx[k]);
  }
  return sp;
}

SymmetricMatrix matrix_function(const SymmetricMatrix& W,
                                const std::function<double(double)>& psi) {
  const Spectrum sp = eigen_sym(W);
  Eigen::VectorXd fl(sp.eigenvalues.size());
  for (int i = 0; i < fl.size(); ++i) {
    const double v = psi(sp.eigenvalues(i));
    if (!std::isfinite(v)) {
      throw SpectralError("matrix_function: psi undefined at an eigenvalue");
    }
    fl(i) = v;
  }
  return SymmetricMatrix(sp.eigenvectors * fl.asDiagonal() *
                         sp.eigenvectors.transpose());
}

double rayleigh(const SymmetricMatrix& W, const Eigen::VectorXd& x) {
  const double n2 = x.squaredNorm();
  if (!(n2 > 0.0)) throw SpectralError("rayleigh: zero vector");
  return x.dot(W.entries() * x) / n2;
}

OrderingVerdict spectrum_ordering_check(const SymmetricMatrix& W,
                                        const SymmetricMatrix& V,
                                        bool expansion) {
  const Spectrum sw = eigen_sym(W);
  if (sw.eigenvalues.minCoeff() < -1e-12) {
    throw SpectralError("spectrum_ordering_check: W not PSD");
  }
  const Spectrum sv = eigen_sym(V);
  double vmin = sv.eigenvalues.cwiseAbs().minCoeff();
  double vmax = sv.eigenvalues.cwiseAbs().maxCoeff();
  if (vmin <= 1e-14) {
    throw SpectralError("spectrum_ordering_check: V singular");
  }
  if (!expansion && vmax > 1.0 + 1e-12) {
    throw SpectralError("spectrum_ordering_check: V is not a contraction");
  }
  if (expansion && vmin < 1.0 - 1e-12) {
    throw SpectralError("spectrum_ordering_check: V is not an expansion");
  }
  const SymmetricMatrix VWV(V.entries() * W.entries() * V.entries());
  const Spectrum svwv = eigen_sym(VWV);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < W.dim(); ++i) {
    const double diff = expansion ? sw.eigenvalues(i) - svwv.eigenvalues(i)
                                  : svwv.eigenvalues(i) - sw.eigenvalues(i);
    worst = std::max(worst, diff);
  }
  return {worst <= 1e-10, worst};
}

}  // namespace spherecap
