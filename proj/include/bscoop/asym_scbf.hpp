#pragma once

#include <vector>

#include "bscoop/asym_cobf.hpp"
#include "bscoop/common.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

/// Per-cell slack 1 - (1/N) sum_{k in j} gamma/(1+gamma); ok when all > 0.
struct Assumption4 {
  VectorXd slack;
  bool ok = false;
};

Assumption4 check_assumption4(const VectorXd& gamma, int K, int N);

/// varsigma_j = 1 - (1/N) sum_{k in j} gamma/(1+gamma).
VectorXd varsigma(const VectorXd& gamma, int K, int N);

/// gamma_u / (varsigma_cell(u) d_own(u)).
VectorXd lambda_bar_scbf(const VectorXd& vs, const VectorXd& gamma,
                         const LargeScaleGains& g);

/// alpha(l, u) = d_own [(1 - tau^2)/(1 + gamma)^2 + tau^2] for l == cell(u),
/// d(l, u) otherwise.
MatrixXd alpha_coeffs(const VectorXd& gamma, const LargeScaleGains& g, const VectorXd& tau);

/// Delta_jj = 1 - (1/N) sum_{k in j} gamma^2/(1+gamma)^2.
VectorXd delta_diagonal(const VectorXd& gamma, int K, int N);

/// diag = Delta, coupling = U.
CellPowerSystem assemble_Delta_U(const VectorXd& gamma, const LargeScaleGains& g,
                                 const VectorXd& tau, int N);

CellPowers solve_powers_scbf(const CellPowerSystem& sys, const MatrixXd& alpha,
                             const VectorXd& gamma, const LargeScaleGains& g,
                             const VectorXd& tau, double sigma2);

VectorXd sinr_bar_scbf(const VectorXd& p, const MatrixXd& alpha, const VectorXd& Delta_diag,
                       const LargeScaleGains& g, const VectorXd& tau, int N, double sigma2);

/// R_u = sum_{l != cell(u)} d(l,u) / d_own(u).
VectorXd relative_interference(const LargeScaleGains& g);

/// Closed-form threshold as published:
///   tau_max^2 = (1 - (1/N) sum_k (gamma/(1+gamma) + gamma R_k))
///             / (1 - (1/N) sum_k gamma^2/(1+gamma)),
/// clamped to [0, 1]. A negative numerator yields 0 with the flag set.
TauMax tau_max_scbf(const VectorXd& gamma, const LargeScaleGains& g, int N);

/// Common tau at which the row-sum condition
///   (1/N) sum_k gamma (tau^2 + R_k)/(1 - tau^2) <= 1 - (1/N) sum_k gamma/(1+gamma)
/// holds with equality:
///   tau^2 = (1 - (1/N) sum_k (gamma/(1+gamma) + gamma R_k))
///         / (1 + (1/N) sum_k gamma^2/(1+gamma)).
TauMax tau_boundary_scbf(const VectorXd& gamma, const LargeScaleGains& g, int N);

/// A_j = (1/N) sum_{k in j} (tau_u^2 + R_u)/(1 - tau_u^2).
VectorXd scbf_load_A(const LargeScaleGains& g, const VectorXd& tau, int N);

struct GammaMax {
  VectorXd gamma_max;  // +inf when unbounded
  std::vector<bool> infeasible;
};

/// Largest common per-cell gamma meeting the row-sum condition: the positive
/// root of A g^2 + (A + K/N - 1) g - 1 = 0. With A = 0 the bound is +inf for
/// K <= N and N/(K - N) otherwise.
GammaMax gamma_max_scbf(const VectorXd& tau, const LargeScaleGains& g, int N);

struct ScbfAsymptotic {
  VectorXd varsigma;
  VectorXd lambda_bar;
  MatrixXd alpha;
  MatrixXd Delta;
  MatrixXd U;
  VectorXd b;
  VectorXd P_bar;
  VectorXd p_bar;
  double total_power = 0.0;
  double spectral_radius = 0.0;
  bool feasible = false;
  bool row_sum_condition = false;
  Assumption4 assumption4;
  VectorXd tau_max;
  VectorXd gamma_max;
};

ScbfAsymptotic analyze_scbf(const VectorXd& gamma, const LargeScaleGains& g,
                            const VectorXd& tau, int N, double sigma2);

}  // namespace bscoop
