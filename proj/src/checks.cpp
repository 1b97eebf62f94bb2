#include "bscoop/checks.hpp"

#include <cmath>
#include <cstdio>

#include "bscoop/asym_cobf.hpp"
#include "bscoop/asym_comp.hpp"
#include "bscoop/asym_scbf.hpp"
#include "bscoop/closed_forms.hpp"

namespace bscoop {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

bool all_feasible(const RandomInstance& r) {
  try {
    return analyze_scbf(r.gamma, r.gains, r.tau, r.N, r.sigma2).feasible &&
           analyze_cobf(r.gamma, r.gains, r.tau, r.N, r.sigma2).feasible &&
           analyze_comp(r.gamma, r.gains, r.tau, r.N, r.sigma2).feasible;
  } catch (const std::runtime_error&) {
    return false;
  }
}

}  // namespace

RandomInstance random_instance(std::mt19937_64& rng, int max_L, int max_K) {
  std::uniform_int_distribution<int> pick_L(1, max_L), pick_K(1, max_K);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    RandomInstance r;
    const int L = pick_L(rng), K = pick_K(rng);
    r.N = std::uniform_int_distribution<int>(2 * K * L, 6 * K * L)(rng);
    MatrixXd d(L, L * K);
    for (int u = 0; u < L * K; ++u) {
      const double own = 1e-9 * (0.1 + unit(rng));
      for (int l = 0; l < L; ++l) d(l, u) = l == u / K ? own : own * 0.6 * unit(rng);
    }
    r.gains = LargeScaleGains(d, K);
    r.gamma = (0.2 + 1.8 * VectorXd::NullaryExpr(L * K, [&] { return unit(rng); }).array()).matrix();
    r.tau = VectorXd::Zero(L * K);
    r.sigma2 = dbm_to_watt(-104.0);
    if (all_feasible(r)) return r;
  }
}

std::vector<CheckResult> run_invariant_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  {
    double worst[3] = {0, 0, 0};
    for (int i = 0; i < 20; ++i) {
      const RandomInstance r = random_instance(rng);
      const int L = r.gains.L();
      const auto a = analyze_scbf(r.gamma, r.gains, r.tau, r.N, r.sigma2);
      const auto b = analyze_cobf(r.gamma, r.gains, r.tau, r.N, r.sigma2);
      const auto c = analyze_comp(r.gamma, r.gains, r.tau, r.N, r.sigma2);
      const DualityGap gs = duality_gap(a, r.gains, r.sigma2, r.N);
      const DualityGap gb = duality_gap(b, r.sigma2, r.N);
      const DualityGap gc = duality_gap(c, r.sigma2, r.N, L);
      worst[0] = std::max(worst[0], gs.gap / gs.primal);
      worst[1] = std::max(worst[1], gb.gap / gb.primal);
      worst[2] = std::max(worst[2], gc.gap / gc.primal);
    }
    const char* names[3] = {"duality gap scbf", "duality gap cobf", "duality gap comp"};
    for (int s = 0; s < 3; ++s)
      out.push_back({names[s], worst[s] <= 1e-8, "worst relative gap " + sci(worst[s])});
  }

  {
    // Cross-to-own ratios 0.6 and 0.4 in both cells.
    MatrixXd sym(2, 4);
    sym << 2.0, 1.0, 1.8, 0.4,
           1.2, 0.4, 3.0, 1.0;
    const LargeScaleGains g(sym, 2);
    VectorXd gk(2);
    gk << 1.0, 3.0;
    VectorXd gamma(4);
    gamma << gk, gk;
    MatrixXd ratios(2, 2);
    ratios << 1.0, 1.0, 0.6, 0.4;
    const int N = 16;
    const double closed = eta_symmetric(gk, ratios, N);
    const VectorXd eta = solve_eta(gamma, g, N);
    const double err = (eta.array() - closed).abs().maxCoeff();
    out.push_back({"eta symmetric closed form", err <= 1e-12, "max error " + sci(err)});
  }

  {
    const int K = 2, L = 2, N = 32;
    MatrixXd d(L, L * K);
    d << 1.0, 0.8, 0.3, 0.1,
         0.2, 0.4, 1.0, 0.9;
    const LargeScaleGains g(d, K);
    const VectorXd eta = solve_eta(VectorXd::Constant(L * K, 1e6), g, N);
    const double err = (eta.array() - eta_high_sinr(K, L, N)).abs().maxCoeff();
    out.push_back({"eta high-SINR limit", err <= 1e-3, "max error " + sci(err)});

    const VectorXd gamma = VectorXd::Constant(L * K, 1.5);
    const VectorXd e0 = solve_eta(gamma, g, N);
    const VectorXd ep = eta_prime(e0, gamma, g, N);
    const double h = 1e-5;
    const VectorXd fd = (eta_at_z(e0, gamma, g, N, h) - eta_at_z(e0, gamma, g, N, -h)) / (2 * h);
    const double ferr = ((fd - ep).array().abs() / ep.array()).maxCoeff();
    out.push_back({"eta derivative vs finite differences", ferr <= 1e-5,
                   "max relative error " + sci(ferr)});
  }

  {
    const CaseStudyResult cs = two_cell_case_study(0.5, 1.0, 4);
    const VectorXd eta = solve_eta(VectorXd::Constant(2, 1.0), two_cell_gains(0.5, 1.0), 4);
    const double err = std::max(std::abs(eta(0) - cs.eta1), std::abs(eta(1) - cs.eta2));
    out.push_back({"two-cell eta vs general solver", err <= 1e-10, "max error " + sci(err)});
    out.push_back({"two-cell orderings",
                   cs.cobf_lambda_ordered && cs.comp_lambda_ordered && cs.scbf_tau_ordered &&
                       cs.cobf_tau_ordered && cs.eta1 > cs.eta2,
                   ""});
  }

  {
    const RandomInstance r = random_instance(rng);
    const LimitComparison lc = limit_comparison(r.gamma, r.gains, r.tau, r.sigma2);
    out.push_back({"MRT limit cobf == scbf", lc.cobf_equals_scbf, ""});
    out.push_back({"MRT limit comp <= cobf", r.gains.L() == 1 ? lc.comp == lc.cobf : lc.comp_below_cobf,
                   "comp/cobf " + sci(lc.comp / lc.cobf)});
  }
  return out;
}

}  // namespace bscoop
