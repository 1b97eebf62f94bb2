#include <cmath>

#include "doctest.h"

#include "bscoop/asym_cobf.hpp"
#include "bscoop/asym_comp.hpp"
#include "bscoop/asym_scbf.hpp"
#include "bscoop/closed_forms.hpp"
#include "helpers.hpp"

using namespace bscoop;
using doctest::Approx;

TEST_CASE("symmetric eta") {
  CHECK(eta_symmetric(VectorXd::Ones(1), MatrixXd::Ones(2, 1), 4) == Approx(0.75));
  CHECK(eta_symmetric(VectorXd::Zero(3), MatrixXd::Ones(2, 3), 4) == 1.0);
  const LargeScaleGains g = test::equal_gains(2, 1);
  const VectorXd eta = solve_eta(VectorXd::Ones(2), g, 4);
  CHECK(std::abs(eta(0) - eta_symmetric(VectorXd::Ones(1), MatrixXd::Ones(2, 1), 4)) <= 1e-12);
}

TEST_CASE("high-SINR eta") {
  CHECK(eta_high_sinr(1, 2, 4) == Approx(0.5));
  CHECK_THROWS_AS(eta_high_sinr(2, 2, 4), InfeasibleError);
  const VectorXd eta = solve_eta(VectorXd::Constant(2, 1e6), test::equal_gains(2, 1), 4);
  CHECK(std::abs(eta(0) - 0.5) <= 1e-3);
}

TEST_CASE("MRT limits") {
  const LargeScaleGains one(MatrixXd::Ones(1, 1), 1);
  CHECK(mrt_limit_powers(Scheme::kCobf, VectorXd::Ones(1), one, VectorXd::Zero(1), 2.5) ==
        Approx(2.5));
  const LargeScaleGains eq = test::equal_gains(4, 2, 3e-9);
  const VectorXd gamma = VectorXd::Constant(8, 3.0);
  const VectorXd tau = VectorXd::Constant(8, 0.3);
  const LimitComparison lc = limit_comparison(gamma, eq, tau, 1e-13);
  CHECK(lc.cobf_equals_scbf);
  CHECK(lc.cobf / lc.comp == Approx(4.0).epsilon(1e-14));
  CHECK(lc.cobf == Approx(8 * 1e-13 / (1 - 0.09) * 3.0 / 3e-9));
  const LimitComparison single = limit_comparison(VectorXd::Ones(2), test::equal_gains(1, 2),
                                                  VectorXd::Zero(2), 1.0);
  CHECK(single.comp == single.cobf);
  CHECK_THROWS_AS(mrt_limit_powers(Scheme::kComp, VectorXd::Ones(1), one, VectorXd::Ones(1), 1.0),
                  ConfigError);
}

TEST_CASE("duality gap with zero targets is zero") {
  const LargeScaleGains g = test::equal_gains(2, 2, 1e-9);
  const VectorXd gamma = VectorXd::Zero(4), tau = VectorXd::Zero(4);
  CHECK(duality_gap(analyze_cobf(gamma, g, tau, 8, 1e-13), 1e-13, 8).gap == 0.0);
  CHECK(duality_gap(analyze_comp(gamma, g, tau, 8, 1e-13), 1e-13, 8, 2).gap == 0.0);
  CHECK(duality_gap(analyze_scbf(gamma, g, tau, 8, 1e-13), g, 1e-13, 8).gap == 0.0);
}

TEST_CASE("duality gap with imperfect CSI is reported") {
  const NetworkConfig c = test::two_cell_network(3, 16, 1.0, 0.2);
  const LargeScaleGains g = test::drop_gains(c);
  const VectorXd gamma = rates_to_sinr_targets(c.rates);
  const DualityGap d = duality_gap(analyze_cobf(gamma, g, tau_vector(c), c.N, c.sigma2_w),
                                   c.sigma2_w, c.N);
  CHECK(d.gap > 1e-6 * d.primal);
}

TEST_CASE("two-cell case study, asymmetric") {
  const CaseStudyResult r = two_cell_case_study(0.5, 1.0, 4);
  CHECK(r.eta1 > r.eta2);
  CHECK(r.cobf_lambda_ordered);
  CHECK(r.comp_lambda_ordered);
  CHECK(r.scbf_tau_ordered);
  CHECK(r.cobf_tau_ordered);
  CHECK(std::abs(r.tau_max_scbf1 - std::sqrt(0.625 / 0.875)) <= 1e-12);
  CHECK(std::abs(r.tau_max_scbf2 - std::sqrt(0.75 / 0.875)) <= 1e-12);
  CHECK(r.tau_max_scbf1 == Approx(0.845154).epsilon(1e-6));
  CHECK(r.tau_max_scbf2 == Approx(0.925820).epsilon(1e-6));
  const VectorXd eta = solve_eta(VectorXd::Ones(2), two_cell_gains(0.5, 1.0), 4);
  CHECK(std::abs(eta(0) - r.eta1) <= 1e-10);
  CHECK(std::abs(eta(1) - r.eta2) <= 1e-10);
}

TEST_CASE("two-cell case study, symmetric") {
  const CaseStudyResult r = two_cell_case_study(1.0, 1.0, 4);
  CHECK(r.eta1 == Approx(0.75).epsilon(1e-13));
  CHECK(r.eta2 == Approx(0.75).epsilon(1e-13));
  CHECK(r.mu1 == Approx(r.mu2));
  CHECK_FALSE(r.cobf_lambda_ordered);
  CHECK_THROWS_AS(two_cell_case_study(0.0, 1.0, 4), ConfigError);
  CHECK_THROWS_AS(two_cell_case_study(0.5, 1.0, 1), ConfigError);
}
