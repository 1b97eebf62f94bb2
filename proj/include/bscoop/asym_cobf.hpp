#pragma once

#include <vector>

#include "bscoop/common.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

struct IterationOptions {
  double tol = 1e-13;
  int max_iter = 100000;
};

/// x(j, u) = gamma_u * d(j, u) / d_own(u) * eta_j / eta_cell(u): the load user
/// u places on BS j's regularizer.
MatrixXd coupling_loads(const VectorXd& eta, const VectorXd& gamma,
                        const LargeScaleGains& g);

/// Picard iteration of
///   eta_j = 1 / ((1/N) sum_u gamma_u r_ju / eta_cell(u) / (1 + x_ju) + 1)
/// with r_ju = d(j,u)/d_own(u), started at eta = 1.
VectorXd solve_eta(const VectorXd& gamma, const LargeScaleGains& g, int N,
                   IterationOptions opts = {});

/// Residuals of the reciprocal form and of eta_j = 1 - (1/N) sum x/(1+x).
double eta_residual_reciprocal(const VectorXd& eta, const VectorXd& gamma,
                               const LargeScaleGains& g, int N);
double eta_residual_complement(const VectorXd& eta, const VectorXd& gamma,
                               const LargeScaleGains& g, int N);

/// Resolvent trace e_j(z) of BS j with the multipliers frozen at
/// lambda = gamma / (eta d_own):
///   e_j = 1 / ((1/N) sum_u lambda_u d(j,u) / (1 + lambda_u d(j,u) e_j) + 1 - z).
/// e_j(0) == eta_j.
VectorXd eta_at_z(const VectorXd& eta, const VectorXd& gamma, const LargeScaleGains& g,
                  int N, double z, IterationOptions opts = {});

/// Gamma_jj = 1 - (1/N) sum_u x_ju^2 / (1 + x_ju)^2.
VectorXd gamma_diagonal(const VectorXd& eta, const VectorXd& gamma,
                        const LargeScaleGains& g, int N);

/// eta'_j = eta_j^2 / Gamma_jj. Throws InfeasibleError if Gamma_jj <= 0.
VectorXd eta_prime(const VectorXd& eta, const VectorXd& gamma, const LargeScaleGains& g,
                   int N);

/// gamma_u / (eta_cell(u) d_own(u)).
VectorXd lambda_bar_cobf(const VectorXd& eta, const VectorXd& gamma,
                         const LargeScaleGains& g);

/// beta(l, u) = d(l,u) [(1 - tau_u^2) / (1 + x_lu)^2 + tau_u^2].
MatrixXd beta_coeffs(const VectorXd& eta, const VectorXd& gamma, const LargeScaleGains& g,
                     const VectorXd& tau);

/// diag * P = coupling * P + sigma2 * b.
struct CellPowerSystem {
  MatrixXd diag;      // L x L diagonal
  MatrixXd coupling;  // L x L nonnegative
  VectorXd b;
};

/// b_j = (1/N) sum_{u in j} gamma_u / (d_own (1 - tau_u^2)),
/// coupling(j, l) = (1/N) sum_{u in j} gamma_u coeff(l, u) / (d_own (1 - tau_u^2)).
CellPowerSystem assemble_cell_system(const VectorXd& diag, const MatrixXd& coeff,
                                     const VectorXd& gamma, const LargeScaleGains& g,
                                     const VectorXd& tau, int N);

CellPowerSystem assemble_power_system(const VectorXd& eta, const VectorXd& gamma,
                                      const LargeScaleGains& g, const VectorXd& tau, int N);

struct Feasibility {
  double spectral_radius = 0.0;
  bool feasible = false;
  /// The row-sum sufficient test: sum_l coupling(j,l) <= diag(j,j) for all j,
  /// strictly for at least one.
  bool row_sum_condition = false;
};

Feasibility cell_feasibility(const CellPowerSystem& sys);
Feasibility cobf_feasibility(const MatrixXd& Gamma, const MatrixXd& F);

struct CellPowers {
  VectorXd P_bar;  // per BS, Watts
  VectorXd p_bar;  // per user
  double total = 0.0;
};

/// P = sigma2 (diag - coupling)^{-1} b and the per-user powers
///   p_u = gamma_u / (d_own (1 - tau_u^2)) (sum_l coeff(l,u) P_l + sigma2) / diag_jj.
/// Throws InfeasibleError (with the spectral radius) unless every P_j > 0.
CellPowers solve_cell_powers(const CellPowerSystem& sys, const MatrixXd& coeff,
                             const VectorXd& gamma, const LargeScaleGains& g,
                             const VectorXd& tau, double sigma2);

CellPowers solve_powers_cobf(const CellPowerSystem& sys, const MatrixXd& beta,
                             const VectorXd& gamma, const LargeScaleGains& g,
                             const VectorXd& tau, double sigma2);

/// p_u d_own (1 - tau^2) diag_jj / (sum_l coeff(l,u) (1/N) sum_{i in l} p_i + sigma2).
VectorXd cell_sinr_bar(const VectorXd& p, const MatrixXd& coeff, const VectorXd& diag,
                       const LargeScaleGains& g, const VectorXd& tau, int N,
                       double sigma2);

VectorXd sinr_bar_cobf(const VectorXd& p, const MatrixXd& beta, const VectorXd& Gamma_diag,
                       const LargeScaleGains& g, const VectorXd& tau, int N,
                       double sigma2);

struct TauMax {
  VectorXd tau_max;
  /// True where the cell is infeasible even with perfect CSI.
  std::vector<bool> infeasible_at_zero;
};

/// Per-cell largest common tau for which the row-sum condition holds, by
/// bisection to `tol`.
TauMax tau_max_cobf(const VectorXd& gamma, const LargeScaleGains& g, int N,
                    double tol = 1e-12);

struct CobfAsymptotic {
  VectorXd eta;
  VectorXd eta_prime;
  VectorXd lambda_bar;
  MatrixXd beta;
  MatrixXd Gamma;
  MatrixXd F;
  VectorXd b;
  VectorXd P_bar;
  VectorXd p_bar;
  double total_power = 0.0;
  double spectral_radius = 0.0;
  bool feasible = false;
  bool row_sum_condition = false;
};

/// Full deterministic analysis. Infeasible instances come back with
/// feasible == false and NaN powers instead of throwing.
CobfAsymptotic analyze_cobf(const VectorXd& gamma, const LargeScaleGains& g,
                            const VectorXd& tau, int N, double sigma2);

}  // namespace bscoop
