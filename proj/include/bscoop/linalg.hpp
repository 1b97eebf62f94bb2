#pragma once

#include "bscoop/common.hpp"

namespace bscoop {

enum class SolvePath {
  kAuto,          // user space when there are fewer columns than rows
  kUserSpace,     // H (I + W H^H H)^{-1}, an M x M LU
  kAntennaSpace,  // Cholesky of H W H^H + I, dim x dim
};

/// Columns of (H diag(w) H^H + I)^{-1} H for w >= 0.
MatrixXcd regularized_images(const MatrixXcd& H, const VectorXd& w,
                             SolvePath path = SolvePath::kAuto);

struct SpectralRadiusOptions {
  double tol = 1e-13;
  int max_iter = 20000;
};

/// Perron root of a square nonnegative matrix.
double spectral_radius(const MatrixXd& M, SpectralRadiusOptions opts = {});

}  // namespace bscoop
