#include <cmath>
#include <random>

#include "doctest.h"

#include "bscoop/asym_cobf.hpp"
#include "bscoop/asym_comp.hpp"
#include "bscoop/checks.hpp"
#include "bscoop/closed_forms.hpp"
#include "helpers.hpp"

using namespace bscoop;
using doctest::Approx;

TEST_CASE("CoMP coefficients on two equal cells") {
  const LargeScaleGains g = test::equal_gains(2, 1);
  const VectorXd gamma = VectorXd::Ones(2);
  const VectorXd mu = solve_mu(gamma, g, 4);
  CHECK(mu(0) == Approx(0.875).epsilon(1e-13));
  CHECK(mu(1) == Approx(0.875).epsilon(1e-13));
  const EpsilonWeights ew = epsilon_weights(mu, gamma, g);
  CHECK(ew.epsilon(0) == Approx(0.875).epsilon(1e-13));
  CHECK(ew.lambda_bar(1) == Approx(1.0 / 0.875).epsilon(1e-13));
}

TEST_CASE("mu and epsilon satisfy their defining equations") {
  const NetworkConfig c = test::two_cell_network(4, 16, 2.0, 0.0);
  const LargeScaleGains g = test::drop_gains(c);
  const VectorXd gamma = rates_to_sinr_targets(c.rates);
  const VectorXd mu = solve_mu(gamma, g, c.N);
  CHECK(mu_residual(mu, gamma, g, c.N) <= 1e-13);
  const EpsilonWeights ew = epsilon_weights(mu, gamma, g);
  CHECK(epsilon_trace_residual(ew.epsilon, gamma, g, c.N) <= 1e-12 * ew.epsilon.maxCoeff());
}

TEST_CASE("CoMP deterministic powers reproduce the targets") {
  const NetworkConfig c = test::two_cell_network(4, 16, 2.0, 0.1);
  const LargeScaleGains g = test::drop_gains(c, 3);
  const VectorXd gamma = rates_to_sinr_targets(c.rates);
  const VectorXd tau = tau_vector(c);
  const CompAsymptotic a = analyze_comp(gamma, g, tau, c.N, c.sigma2_w);
  REQUIRE(a.feasible);
  const VectorXd s = sinr_bar_comp(a.p_bar, a.epsilon, a.eps_prime, gamma, tau, c.N, c.L,
                                   c.sigma2_w);
  CHECK(((s - gamma).array().abs() / gamma.array()).maxCoeff() <= 1e-12);
  CHECK((a.Omega_bar.array() > 0.0).all());
  CHECK(a.spectral_radius < 1.0);
}

TEST_CASE("CoMP duality gap vanishes with perfect CSI") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    const RandomInstance r = random_instance(rng);
    const CompAsymptotic a = analyze_comp(r.gamma, r.gains, r.tau, r.N, r.sigma2);
    const DualityGap d = duality_gap(a, r.sigma2, r.N, r.gains.L());
    CHECK(d.gap <= 1e-10 * d.primal);
  }
}

TEST_CASE("CoMP threshold puts every column sum of Z at one") {
  const NetworkConfig c = test::two_cell_network(3, 32, 1.0, 0.0);
  const LargeScaleGains g = test::drop_gains(c, 2);
  const VectorXd gamma = rates_to_sinr_targets(c.rates);
  const VectorXd mu = solve_mu(gamma, g, c.N);
  const EpsilonWeights ew = epsilon_weights(mu, gamma, g);
  const EpsPrime ep = build_eps_prime_systems(mu, ew.epsilon, gamma, g, c.N);
  const UserTauMax tm = tau_max_comp(ew.epsilon, ep, gamma, c.N, c.L);
  for (bool f : tm.infeasible_at_zero) REQUIRE_FALSE(f);
  const CompZSystem zs = assemble_Z_z(ew.epsilon, ep, gamma, tm.tau_max, c.N, c.L);
  const VectorXd cols = zs.Z.colwise().sum().transpose();
  CHECK((cols.array() - 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("a single cell makes CoMP and CoBF coincide") {
  MatrixXd d(1, 3);
  d << 1e-9, 3e-9, 5e-10;
  const LargeScaleGains g(d, 3);
  VectorXd gamma(3), tau(3);
  gamma << 1.0, 2.0, 0.5;
  tau << 0.1, 0.2, 0.0;
  const CompAsymptotic a = analyze_comp(gamma, g, tau, 12, 1e-13);
  const CobfAsymptotic b = analyze_cobf(gamma, g, tau, 12, 1e-13);
  CHECK(a.total_power == Approx(b.total_power).epsilon(1e-10));
  CHECK((a.lambda_bar - b.lambda_bar).norm() <= 1e-10 * b.lambda_bar.norm());
}

TEST_CASE("CoMP interference factor") {
  CHECK(comp_interference_factor(1.0, 0.0) == Approx(0.25));
  CHECK(comp_interference_factor(3.0, 1.0) == Approx(1.0));
}
