#include "bscoop/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace bscoop {

MatrixXcd regularized_images(const MatrixXcd& H, const VectorXd& w, SolvePath path) {
  const Eigen::Index dim = H.rows();
  const Eigen::Index M = H.cols();
  if (w.size() != M) throw ConfigError("weight vector does not match channel columns");
  if ((w.array() < 0.0).any() || !w.allFinite())
    throw NumericError("regularization weights must be finite and nonnegative");
  if (path == SolvePath::kAuto)
    path = M < dim ? SolvePath::kUserSpace : SolvePath::kAntennaSpace;

  if (path == SolvePath::kUserSpace) {
    MatrixXcd S = w.cast<cplx>().asDiagonal() * (H.adjoint() * H);
    S.diagonal().array() += 1.0;
    Eigen::PartialPivLU<MatrixXcd> lu(S);
    MatrixXcd X = lu.solve(MatrixXcd::Identity(M, M));
    if (!X.allFinite()) throw NumericError("singular user-space system");
    return H * X;
  }
  MatrixXcd A = H * w.cast<cplx>().asDiagonal() * H.adjoint();
  A.diagonal().array() += 1.0;
  Eigen::LLT<MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success) throw NumericError("regularized Gram matrix not positive definite");
  return llt.solve(H);
}

double spectral_radius(const MatrixXd& M, SpectralRadiusOptions opts) {
  if (M.rows() != M.cols()) throw ConfigError("spectral radius of a non-square matrix");
  const Eigen::Index n = M.rows();
  if (n == 0) return 0.0;
  if (!M.allFinite()) throw NumericError("non-finite matrix entries");
  if ((M.array() < 0.0).any()) throw NumericError("matrix must be nonnegative");
  if (n == 1) return M(0, 0);

  // The shift keeps the iteration aperiodic for reducible or cyclic M.
  // For x > 0 the Collatz-Wielandt ratios (Sx)_i / x_i bracket rho(S).
  const MatrixXd S = M + MatrixXd::Identity(n, n);
  VectorXd x = VectorXd::Ones(n);
  for (int it = 0; it < opts.max_iter; ++it) {
    VectorXd y = S * x;
    const double lo = (y.array() / x.array()).minCoeff();
    const double hi = (y.array() / x.array()).maxCoeff();
    if (hi - lo <= opts.tol * hi) return std::max(0.0, 0.5 * (lo + hi) - 1.0);
    x = y / y.maxCoeff();
    if ((x.array() <= 1e-250).any()) break;
  }
  Eigen::EigenSolver<MatrixXd> es(M, false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return r;
}

}  // namespace bscoop
