#include <cmath>

#include "doctest.h"

#include "bscoop/linalg.hpp"

using namespace bscoop;
using doctest::Approx;

TEST_CASE("regularized images agree across solve paths") {
  const MatrixXcd H = MatrixXcd::Random(6, 4);
  VectorXd w(4);
  w << 0.5, 1.0, 2.0, 0.0;
  const MatrixXcd R = (H * w.cast<cplx>().asDiagonal() * H.adjoint() +
                       MatrixXcd::Identity(6, 6)).inverse() * H;
  CHECK((regularized_images(H, w, SolvePath::kUserSpace) - R).norm() <= 1e-12 * R.norm());
  CHECK((regularized_images(H, w, SolvePath::kAntennaSpace) - R).norm() <= 1e-12 * R.norm());
  CHECK((regularized_images(H, w) - R).norm() <= 1e-12 * R.norm());
}

TEST_CASE("spectral radius of a 2x2 nonnegative matrix") {
  MatrixXd M(2, 2);
  M << 0.3, 0.7,
       0.2, 0.5;
  const double a = M(0, 0), b = M(0, 1), c = M(1, 0), d = M(1, 1);
  const double rho = 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  CHECK(spectral_radius(M) == Approx(rho).epsilon(1e-12));
}

TEST_CASE("spectral radius edge cases") {
  CHECK(spectral_radius(MatrixXd::Zero(3, 3)) == 0.0);
  MatrixXd T(3, 3);
  T << 0.2, 5.0, 1.0,
       0.0, 0.7, 3.0,
       0.0, 0.0, 0.4;
  CHECK(spectral_radius(T) == Approx(0.7).epsilon(1e-12));
  MatrixXd P(2, 2);
  P << 0.0, 2.0,
       0.5, 0.0;
  CHECK(spectral_radius(P) == Approx(1.0).epsilon(1e-12));
  CHECK(spectral_radius(3.0 * MatrixXd::Ones(4, 4)) == Approx(12.0).epsilon(1e-12));
}
