#pragma once

// Symmetric eigendecomposition (cyclic Jacobi rotations), operator functions
// of symmetric matrices, and the contraction spectrum-ordering check.

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace spherecap {

struct SpectralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symmetrized on construction; throws on non-finite entries or dim > 64.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXd m_;
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // sorted ascending
  Eigen::MatrixXd eigenvectors;  // orthogonal, columns match eigenvalues
};

// Cyclic Jacobi rotation scheme; off-diagonal tolerance 1e-13, <= 30 sweeps.
Spectrum eigen_sym(const SymmetricMatrix& W);

SymmetricMatrix matrix_function(const SymmetricMatrix& W,
                                const std::function<double(double)>& psi);

double rayleigh(const SymmetricMatrix& W, const Eigen::VectorXd& x);

struct OrderingVerdict {
  bool ordered = false;
  double max_violation = 0.0;  // worst lambda_i - kappa_i (contraction case)
};

// Checks that the spectrum of V W V is dominated by that of W when W is PSD
// and V is a symmetric invertible contraction (reversed for expansions).
OrderingVerdict spectrum_ordering_check(const SymmetricMatrix& W,
                                        const SymmetricMatrix& V,
                                        bool expansion = false);

}  // namespace spherecap
