#pragma once

#include <vector>

#include "bscoop/asym_cobf.hpp"
#include "bscoop/common.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

/// Picard iteration of
///   mu_l = 1 / ((1/NL) sum_i d(l,i) / eps_i * gamma_i / (1 + gamma_i) + 1),
///   eps_i = (1/L) sum_j d(j,i) mu_j,
/// started at mu = 1.
VectorXd solve_mu(const VectorXd& gamma, const LargeScaleGains& g, int N,
                  IterationOptions opts = {});

double mu_residual(const VectorXd& mu, const VectorXd& gamma, const LargeScaleGains& g,
                   int N);

/// Residual of eps_k = (1/NL) tr(Theta_k T) with T rebuilt from eps alone.
double epsilon_trace_residual(const VectorXd& epsilon, const VectorXd& gamma,
                              const LargeScaleGains& g, int N);

struct EpsilonWeights {
  VectorXd epsilon;     // (1/L) sum_l d(l,k) mu_l
  VectorXd lambda_bar;  // gamma_k / eps_k
};

EpsilonWeights epsilon_weights(const VectorXd& mu, const VectorXd& gamma,
                               const LargeScaleGains& g);

/// B(i,k) = (1/L) sum_l d(l,i) d(l,k) mu_l^2
/// J(i,n) = B(i,n) gamma_n^2 / (eps_n^2 NL (1 + gamma_n)^2)
/// self   = (I - J)^{-1} c,  c_i = (1/L) sum_l d(l,i) mu_l^2
/// cross  = (I - J)^{-1} B,  cross(i,k) = eps'_ik
struct EpsPrime {
  MatrixXd B;
  MatrixXd J;
  VectorXd c;
  VectorXd self;
  MatrixXd cross;
};

/// One LU of (I - J) serves every right-hand side. Throws NumericError if
/// rho(J) >= 1 or the factorization is singular.
EpsPrime build_eps_prime_systems(const VectorXd& mu, const VectorXd& epsilon,
                                 const VectorXd& gamma, const LargeScaleGains& g, int N);

/// [1 + tau^2 ((1+gamma)^2 - 1)] / (1+gamma)^2.
double comp_interference_factor(double gamma, double tau);

/// p_k eps_k^2 / eps'_k (1 - tau_k^2) /
///   (factor_k (1/NL) sum_i p_i eps'_ik / eps'_i + sigma2).
VectorXd sinr_bar_comp(const VectorXd& p, const VectorXd& epsilon, const EpsPrime& ep,
                       const VectorXd& gamma, const VectorXd& tau, int N, int L,
                       double sigma2);

struct CompZSystem {
  MatrixXd Z;  // Z(k,i) = (1/NL) gamma_i/(1-tau_i^2) eps'_ik/eps_i^2 factor_i
  VectorXd z;  // z_k   = (1/NL) sum_i gamma_i/(1-tau_i^2) eps'_ik/eps_i^2
};

CompZSystem assemble_Z_z(const VectorXd& epsilon, const EpsPrime& ep, const VectorXd& gamma,
                         const VectorXd& tau, int N, int L);

struct CompPowers {
  VectorXd Omega_bar;
  VectorXd p_bar;
  double total = 0.0;
};

/// Omega = sigma2 (I - Z)^{-1} z and
///   p_k = gamma_k / (1 - tau_k^2) eps'_k / eps_k^2 (factor_k Omega_k + sigma2).
/// Throws InfeasibleError unless Omega is finite and nonnegative.
CompPowers solve_powers_comp(const CompZSystem& zs, const VectorXd& epsilon,
                             const EpsPrime& ep, const VectorXd& gamma, const VectorXd& tau,
                             int N, int L, double sigma2);

struct UserTauMax {
  VectorXd tau_max;
  std::vector<bool> infeasible_at_zero;
};

/// Column-sum condition solved per user: with A_i = gamma_i S_i / eps_i^2,
/// S_i = (1/NL) sum_k eps'_ik and g = (1+gamma_i)^2,
///   tau_max^2 = (g - A_i) / (g + A_i (g - 1)).
UserTauMax tau_max_comp(const VectorXd& epsilon, const EpsPrime& ep, const VectorXd& gamma,
                        int N, int L);

struct CompAsymptotic {
  VectorXd mu;
  VectorXd epsilon;
  VectorXd lambda_bar;
  EpsPrime eps_prime;
  MatrixXd Z;
  VectorXd z_vec;
  VectorXd Omega_bar;
  VectorXd p_bar;
  double total_power = 0.0;
  double spectral_radius = 0.0;
  bool feasible = false;
  bool column_sum_condition = false;
};

CompAsymptotic analyze_comp(const VectorXd& gamma, const LargeScaleGains& g,
                            const VectorXd& tau, int N, double sigma2);

}  // namespace bscoop
