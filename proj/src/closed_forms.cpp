#include "bscoop/closed_forms.hpp"

#include <cmath>
#include <string>

namespace bscoop {

double eta_symmetric(const VectorXd& gamma, const MatrixXd& ratios, int N) {
  if (N < 1) throw ConfigError("N must be >= 1");
  if (ratios.cols() != gamma.size()) throw ConfigError("ratios must be L x K");
  double s = 0.0;
  for (Eigen::Index l = 0; l < ratios.rows(); ++l)
    for (Eigen::Index i = 0; i < ratios.cols(); ++i) {
      const double x = gamma(i) * ratios(l, i);
      s += x / (1.0 + x);
    }
  return 1.0 - s / N;
}

double eta_high_sinr(int K, int L, int N) {
  if (N < 1 || K < 1 || L < 1) throw ConfigError("K, L and N must be >= 1");
  const double eta = 1.0 - static_cast<double>(K) * L / N;
  if (!(eta > 0.0))
    throw InfeasibleError("KL >= N: no positive high-SINR limit");
  return eta;
}

namespace {

DualityGap make_gap(double primal, double dual) {
  return {primal, dual, std::abs(primal - dual)};
}

}  // namespace

DualityGap duality_gap(const CobfAsymptotic& a, double sigma2, int N) {
  return make_gap(a.total_power, a.lambda_bar.sum() * sigma2 / N);
}

DualityGap duality_gap(const CompAsymptotic& a, double sigma2, int N, int L) {
  return make_gap(a.total_power, a.lambda_bar.sum() * sigma2 / (static_cast<double>(N) * L));
}

DualityGap duality_gap(const ScbfAsymptotic& a, const LargeScaleGains& g, double sigma2,
                       int N) {
  double dual = 0.0;
  for (int u = 0; u < g.users(); ++u) {
    const int j = g.cell_of(u);
    double s2 = sigma2;
    for (int l = 0; l < g.L(); ++l)
      if (l != j) s2 += g.comp(l, u) * a.P_bar(l);
    dual += a.lambda_bar(u) * s2;
  }
  return make_gap(a.total_power, dual / N);
}

double mrt_limit_powers(Scheme s, const VectorXd& gamma, const LargeScaleGains& g,
                        const VectorXd& tau, double sigma2) {
  if (gamma.size() != g.users() || tau.size() != g.users())
    throw ConfigError("gamma and tau must have one entry per user");
  double total = 0.0;
  for (int u = 0; u < g.users(); ++u) {
    const double q = 1.0 - tau(u) * tau(u);
    if (!(q > 0.0))
      throw ConfigError("tau = 1 on user " + std::to_string(u) + ": no finite limit");
    const double gain = s == Scheme::kComp ? g.matrix().col(u).sum() : g.own(u);
    total += sigma2 * gamma(u) / (q * gain);
  }
  return total;
}

LimitComparison limit_comparison(const VectorXd& gamma, const LargeScaleGains& g,
                                 const VectorXd& tau, double sigma2) {
  LimitComparison c;
  c.scbf = mrt_limit_powers(Scheme::kScbf, gamma, g, tau, sigma2);
  c.cobf = mrt_limit_powers(Scheme::kCobf, gamma, g, tau, sigma2);
  c.comp = mrt_limit_powers(Scheme::kComp, gamma, g, tau, sigma2);
  c.comp_below_cobf = c.comp < c.cobf;
  c.cobf_equals_scbf = c.cobf == c.scbf;
  return c;
}

LargeScaleGains two_cell_gains(double alpha, double d) {
  MatrixXd m(2, 2);
  m << d, alpha * d,
       d, d;
  return LargeScaleGains(m, 1);
}

CaseStudyResult two_cell_case_study(double alpha, double gamma, int N, double d) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (N < 2) throw ConfigError("N must be >= 2");
  if (!(d > 0.0)) throw ConfigError("d must be > 0");

  CaseStudyResult r;
  r.alpha = alpha;
  const double own = gamma / (1.0 + gamma);
  r.varsigma = 1.0 - own / N;

  // Reciprocal form of the pair, iterated from (1, 1).
  double e1 = 1.0, e2 = 1.0, diff = 0.0;
  constexpr int kMaxIter = 100000;
  int it = 0;
  for (; it < kMaxIter; ++it) {
    const double x12 = gamma * alpha * e1 / e2;  // UE 2 load on BS 1
    const double x21 = gamma * e2 / e1;          // UE 1 load on BS 2
    const double n1 = 1.0 / ((own + x12 / (1.0 + x12)) / (N * e1) + 1.0);
    const double n2 = 1.0 / ((own + x21 / (1.0 + x21)) / (N * e2) + 1.0);
    diff = std::max(std::abs(n1 - e1), std::abs(n2 - e2));
    e1 = n1;
    e2 = n2;
    if (diff <= 1e-15) break;
  }
  if (it == kMaxIter) throw ConvergenceError("two-cell eta pair did not converge", diff);
  r.eta1 = e1;
  r.eta2 = e2;

  r.lambda_scbf1 = gamma / (r.varsigma * d);
  r.lambda_scbf2 = r.lambda_scbf1;
  r.lambda_cobf11 = gamma / (e1 * d);
  r.lambda_cobf21 = gamma / (e2 * d);

  const LargeScaleGains g = two_cell_gains(alpha, d);
  const VectorXd gv = VectorXd::Constant(2, gamma);
  const VectorXd mu = solve_mu(gv, g, N);
  const EpsilonWeights ew = epsilon_weights(mu, gv, g);
  r.mu1 = mu(0);
  r.mu2 = mu(1);
  r.lambda_comp1 = ew.lambda_bar(0);
  r.lambda_comp2 = ew.lambda_bar(1);

  const TauMax ts = tau_max_scbf(gv, g, N);
  r.tau_max_scbf1 = ts.tau_max(0);
  r.tau_max_scbf2 = ts.tau_max(1);
  const TauMax tc = tau_max_cobf(gv, g, N);
  r.tau_max_cobf1 = tc.tau_max(0);
  r.tau_max_cobf2 = tc.tau_max(1);
  const EpsPrime ep = build_eps_prime_systems(mu, ew.epsilon, gv, g, N);
  const UserTauMax tm = tau_max_comp(ew.epsilon, ep, gv, N, 2);
  r.tau_max_comp1 = tm.tau_max(0);
  r.tau_max_comp2 = tm.tau_max(1);

  r.cobf_lambda_ordered = r.lambda_cobf11 < r.lambda_cobf21;
  r.comp_lambda_ordered = r.lambda_comp1 < r.lambda_comp2;
  r.scbf_tau_ordered = r.tau_max_scbf1 < r.tau_max_scbf2;
  r.cobf_tau_ordered = r.tau_max_cobf1 < r.tau_max_cobf2;
  r.comp_tau_ordered = r.tau_max_comp1 < r.tau_max_comp2;
  return r;
}

}  // namespace bscoop
