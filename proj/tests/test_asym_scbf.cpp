#include <cmath>
#include <random>

#include "doctest.h"

#include "bscoop/asym_scbf.hpp"
#include "bscoop/checks.hpp"
#include "bscoop/closed_forms.hpp"
#include "helpers.hpp"

using namespace bscoop;
using doctest::Approx;

TEST_CASE("ScBF slack and multipliers") {
  CHECK(varsigma(VectorXd::Ones(2), 1, 4)(0) == Approx(0.875));
  const Assumption4 a4 = check_assumption4(VectorXd::Constant(1, 3.0), 1, 4);
  CHECK(a4.slack(0) == Approx(0.8125));
  CHECK(a4.ok);
  CHECK_FALSE(check_assumption4(VectorXd::Constant(4, 3.0), 4, 3).ok);
  const LargeScaleGains g = test::equal_gains(2, 1, 2.0);
  const VectorXd lam = lambda_bar_scbf(varsigma(VectorXd::Ones(2), 1, 4), VectorXd::Ones(2), g);
  CHECK(lam(0) == Approx(1.0 / (0.875 * 2.0)));
}

TEST_CASE("ScBF deterministic powers reproduce the targets") {
  const NetworkConfig c = test::two_cell_network(4, 16, 2.0, 0.1);
  const LargeScaleGains g = test::drop_gains(c);
  const VectorXd gamma = rates_to_sinr_targets(c.rates);
  const VectorXd tau = tau_vector(c);
  const ScbfAsymptotic a = analyze_scbf(gamma, g, tau, c.N, c.sigma2_w);
  REQUIRE(a.feasible);
  const VectorXd s = sinr_bar_scbf(a.p_bar, a.alpha, a.Delta.diagonal(), g, tau, c.N, c.sigma2_w);
  CHECK(((s - gamma).array().abs() / gamma.array()).maxCoeff() <= 1e-12);
}

TEST_CASE("ScBF duality gap vanishes with perfect CSI") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    const RandomInstance r = random_instance(rng);
    const ScbfAsymptotic a = analyze_scbf(r.gamma, r.gains, r.tau, r.N, r.sigma2);
    const DualityGap d = duality_gap(a, r.gains, r.sigma2, r.N);
    CHECK(d.gap <= 1e-10 * d.primal);
  }
}

TEST_CASE("exact ScBF boundary puts the row sums on the diagonal") {
  const NetworkConfig c = test::two_cell_network(3, 16, 1.0, 0.0);
  const LargeScaleGains g = test::drop_gains(c, 6);
  const VectorXd gamma = rates_to_sinr_targets(c.rates);
  const TauMax tb = tau_boundary_scbf(gamma, g, c.N);
  for (int j = 0; j < 2; ++j) {
    REQUIRE_FALSE(tb.infeasible_at_zero[j]);
    const VectorXd tau = VectorXd::Constant(g.users(), tb.tau_max(j));
    const CellPowerSystem sys = assemble_Delta_U(gamma, g, tau, c.N);
    CHECK(sys.coupling.row(j).sum() == Approx(sys.diag(j, j)).epsilon(1e-12));
  }
  const TauMax tp = tau_max_scbf(gamma, g, c.N);
  CHECK((tp.tau_max.array() > tb.tau_max.array()).all());
}

TEST_CASE("gamma_max is the row-sum boundary") {
  const NetworkConfig c = test::two_cell_network(3, 16, 1.0, 0.2);
  const LargeScaleGains g = test::drop_gains(c, 6);
  const VectorXd tau = tau_vector(c);
  const GammaMax gm = gamma_max_scbf(tau, g, c.N);
  VectorXd gamma(g.users());
  for (int u = 0; u < g.users(); ++u) gamma(u) = gm.gamma_max(g.cell_of(u));
  const CellPowerSystem sys = assemble_Delta_U(gamma, g, tau, c.N);
  for (int j = 0; j < 2; ++j)
    CHECK(sys.coupling.row(j).sum() == Approx(sys.diag(j, j)).epsilon(1e-12));
}

TEST_CASE("gamma_max without interference") {
  MatrixXd d = MatrixXd::Constant(1, 6, 1e-9);
  const LargeScaleGains g(d, 6);
  CHECK(gamma_max_scbf(VectorXd::Zero(6), g, 4).gamma_max(0) == Approx(2.0));
  CHECK(std::isinf(gamma_max_scbf(VectorXd::Zero(6), g, 6).gamma_max(0)));
  CHECK(varsigma(VectorXd::Constant(6, 2.0), 6, 4)(0) == Approx(0.0));
}

TEST_CASE("relative interference") {
  MatrixXd d(2, 2);
  d << 2.0, 1.0,
       1.0, 4.0;
  const VectorXd R = relative_interference(LargeScaleGains(d, 1));
  CHECK(R(0) == Approx(0.5));
  CHECK(R(1) == Approx(0.25));
}
