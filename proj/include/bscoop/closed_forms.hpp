#pragma once

#include "bscoop/asym_cobf.hpp"
#include "bscoop/asym_comp.hpp"
#include "bscoop/asym_scbf.hpp"
#include "bscoop/common.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

/// Common eta of a fully symmetric network:
///   eta = 1 - (1/N) sum_{l,i} gamma_i r(l,i) / (1 + gamma_i r(l,i)),
/// where r(l,i) = d(j,l,i)/d(l,l,i) is the same for every j.
/// `gamma` has K entries and `ratios` is L x K.
double eta_symmetric(const VectorXd& gamma, const MatrixXd& ratios, int N);

/// High-SINR limit 1 - KL/N. Throws InfeasibleError when KL >= N.
double eta_high_sinr(int K, int L, int N);

struct DualityGap {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;  // |primal - dual|
};

/// Dual objective sum(lambda_bar) sigma2 / N.
DualityGap duality_gap(const CobfAsymptotic& a, double sigma2, int N);
/// Dual objective sum(lambda_bar) sigma2 / (NL).
DualityGap duality_gap(const CompAsymptotic& a, double sigma2, int N, int L);
/// Dual objective sum_u lambda_bar_u sigma_bar_u^2 / N with
/// sigma_bar_u^2 = sum_{l != cell(u)} d(l,u) P_bar_l + sigma2.
DualityGap duality_gap(const ScbfAsymptotic& a, const LargeScaleGains& g, double sigma2,
                       int N);

/// N * P_T as N grows with K fixed (MRT regime):
///   ScBF, CoBF: sum_u sigma2 gamma_u / ((1 - tau_u^2) d_own(u))
///   CoMP:       sum_u sigma2 gamma_u / ((1 - tau_u^2) sum_l d(l,u))
/// Throws ConfigError when some tau_u = 1.
double mrt_limit_powers(Scheme s, const VectorXd& gamma, const LargeScaleGains& g,
                        const VectorXd& tau, double sigma2);

struct LimitComparison {
  double scbf = 0.0;
  double cobf = 0.0;
  double comp = 0.0;
  bool comp_below_cobf = false;
  bool cobf_equals_scbf = false;
};

LimitComparison limit_comparison(const VectorXd& gamma, const LargeScaleGains& g,
                                 const VectorXd& tau, double sigma2);

/// Gains of the two-cell, one-user-per-cell example: both BSs reach UE 1 with
/// gain d, BS 2 reaches UE 2 with d and BS 1 reaches UE 2 with alpha d.
LargeScaleGains two_cell_gains(double alpha, double d);

struct CaseStudyResult {
  double alpha = 1.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double varsigma = 0.0;
  double lambda_scbf1 = 0.0;
  double lambda_scbf2 = 0.0;
  double lambda_cobf11 = 0.0;
  double lambda_cobf21 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double lambda_comp1 = 0.0;
  double lambda_comp2 = 0.0;
  double tau_max_scbf1 = 0.0;
  double tau_max_scbf2 = 0.0;
  double tau_max_cobf1 = 0.0;
  double tau_max_cobf2 = 0.0;
  double tau_max_comp1 = 0.0;
  double tau_max_comp2 = 0.0;
  bool cobf_lambda_ordered = false;  // lambda11 < lambda21
  bool comp_lambda_ordered = false;  // lambda1 < lambda2
  bool scbf_tau_ordered = false;     // tau1_max < tau2_max
  bool cobf_tau_ordered = false;
  bool comp_tau_ordered = false;
};

/// Solves the coupled pair
///   eta1 = 1 - (1/N)(gamma/(1+gamma) + gamma/(e/alpha + gamma)),
///   eta2 = 1 - (1/N)(gamma/(1+gamma) + gamma/(1/e + gamma)),  e = eta2/eta1,
/// and fills the per-scheme multipliers and CSI thresholds.
/// Throws ConfigError for alpha outside (0, 1], gamma <= 0 or N < 2, and
/// ConvergenceError if the pair does not settle.
CaseStudyResult two_cell_case_study(double alpha, double gamma, int N, double d = 1.0);

}  // namespace bscoop
