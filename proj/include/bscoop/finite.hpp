#pragma once

#include <vector>

#include "bscoop/common.hpp"
#include "bscoop/linalg.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

struct FixedPointOptions {
  double tol = 1e-9;
  int max_iter = 1000;
  SolvePath path = SolvePath::kAuto;
};

/// N for ScBF/CoBF, NL for CoMP.
double scheme_scale(Scheme s, int N, int L);

/// One precoding unit: the estimated channels entering its regularizer and
/// the users it beamforms to.
struct Transmitter {
  MatrixXcd H;               // dim x M
  std::vector<int> columns;  // global user of each column of H
  std::vector<int> served;   // positions in `columns` of the served users
};

/// ScBF: one per BS over its own users. CoBF: one per BS over all users.
/// CoMP: a single NL-antenna unit over all users.
std::vector<Transmitter> transmitters(Scheme s, const ChannelSet& ch);

struct MultiplierResult {
  VectorXd lambda;
  int iterations = 0;
  double residual = 0.0;
};

/// Iterates lambda_u <- (gamma/(1+gamma)) / ((1/s) h_u^H Q h_u) with
/// Q = (sum_i (lambda_i/s) h_i h_i^H + I)^{-1} on estimated channels.
/// Throws ConvergenceError after opts.max_iter sweeps.
MultiplierResult fixed_point_multipliers(Scheme s, const ChannelSet& ch,
                                         const VectorXd& gamma,
                                         const FixedPointOptions& opts = {});

/// One application of the fixed-point map.
VectorXd fixed_point_map(Scheme s, const ChannelSet& ch, const VectorXd& gamma,
                         const VectorXd& lambda, SolvePath path = SolvePath::kAuto);

/// Largest componentwise relative gap between lambda and its image.
double fixed_point_residual(Scheme s, const ChannelSet& ch, const VectorXd& gamma,
                            const VectorXd& lambda);

/// Column u is the unit-norm beam of user u (N rows, or NL for CoMP).
MatrixXcd beamform_directions(Scheme s, const ChannelSet& ch, const VectorXd& lambda,
                              SolvePath path = SolvePath::kAuto);

/// G(r, t) = |h_r^H v_t|^2 / (s |v_t|^2) on true channels, where h_r is the
/// channel from the transmitter of beam t to user r.
struct CrossGainMatrix {
  MatrixXd G;
  VectorXd useful() const { return G.diagonal(); }
  MatrixXd interference() const;
};

CrossGainMatrix realized_gain_matrix(Scheme s, const ChannelSet& ch,
                                     const MatrixXcd& directions);

/// Powers meeting every SINR target with equality. Throws InfeasibleError
/// when the system is singular or any power is negative or non-finite.
VectorXd solve_powers_finite(const CrossGainMatrix& gains, const VectorXd& gamma,
                             double sigma2);

VectorXd realized_sinr(const CrossGainMatrix& gains, const VectorXd& p, double sigma2);

double total_power(const VectorXd& p, double scale);

/// Power radiated by each BS.
VectorXd bs_powers(Scheme s, const VectorXd& p, const MatrixXcd& directions, int N,
                   int L, int K);

struct FiniteSolution {
  Scheme scheme = Scheme::kCobf;
  VectorXd lambda;
  MatrixXcd directions;
  CrossGainMatrix gains;
  VectorXd powers;
  VectorXd realized_sinr;
  VectorXd bs_power;
  double total_power = 0.0;
  int iterations = 0;
};

FiniteSolution solve_finite(Scheme s, const ChannelSet& ch, const VectorXd& gamma,
                            double sigma2, const FixedPointOptions& opts = {});

}  // namespace bscoop
