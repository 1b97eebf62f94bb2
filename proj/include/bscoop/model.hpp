#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bscoop/common.hpp"

namespace bscoop {

// Users are indexed globally as u = j*K + k (cell j, slot k), 0-based.

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double dbm_to_watt(double dbm);
double db_to_linear(double db);

struct NetworkConfig {
  int L = 1;
  int K = 1;
  int N = 1;
  double side_m = 500.0;
  /// Explicit BS coordinates; empty means a sqrt(L) x sqrt(L) grid.
  std::vector<Point> bs_positions_m;
  /// Side of the square cell around each explicit BS. Ignored for grids.
  double cell_side_m = 0.0;
  /// UEs closer than this to their own BS are redrawn.
  double min_ue_distance_m = 0.0;
  double kappa = 3.5;
  double L_cutoff_db = -86.5;
  double x_cutoff_m = 25.0;
  double sigma2_w = dbm_to_watt(-104.0);
  /// Per-user target rates in bit/s/Hz, length L*K.
  std::vector<double> rates;
  /// Per-user CSI error parameter tau (not tau^2), length L*K. The same
  /// value applies on the links from every BS to that user.
  std::vector<double> tau;
  std::uint64_t seed = 1;

  int users() const { return L * K; }
  /// Throws ConfigError on any violated invariant.
  void validate() const;
  /// Sets every user's rate (or tau) to a single value.
  void set_uniform_rate(double r);
  void set_uniform_tau2(double tau2);
};

struct PathLossParams {
  double kappa = 3.5;
  double L_cutoff_db = -86.5;
  double x_cutoff_m = 25.0;
};

PathLossParams path_loss_params(const NetworkConfig& cfg);

/// d = 2 L_xbar / (1 + (|x| / xbar)^kappa).
double path_loss(Point offset, const PathLossParams& p);

struct Geometry {
  int L = 0;
  int K = 0;
  std::vector<Point> bs;
  std::vector<Point> ue;  // size L*K
  std::vector<Point> cell_lo;  // lower-left corner of each cell
  double cell_side = 0.0;
};

/// BS positions only (grid centers or explicit). No UEs.
Geometry base_geometry(const NetworkConfig& cfg);

/// UE drop for one trial, drawn from the kDrop substream of `trial`.
Geometry build_geometry(const NetworkConfig& cfg, std::uint64_t trial);

/// Average gains d(l, u) from BS l to global user u.
class LargeScaleGains {
 public:
  LargeScaleGains() = default;
  LargeScaleGains(MatrixXd d, int K);

  int L() const { return static_cast<int>(d_.rows()); }
  int K() const { return K_; }
  int users() const { return static_cast<int>(d_.cols()); }
  static int cell_of(int u, int K) { return u / K; }
  int cell_of(int u) const { return u / K_; }

  /// d_comp(l, u) in the stacked-user indexing.
  double comp(int l, int u) const { return d_(l, u); }
  /// d_cobf(l, j, k): BS l to UE k of cell j.
  double cobf(int l, int j, int k) const { return d_(l, j * K_ + k); }
  /// Gain from the serving BS.
  double own(int u) const { return d_(cell_of(u), u); }
  const MatrixXd& matrix() const { return d_; }

 private:
  MatrixXd d_;
  int K_ = 1;
};

LargeScaleGains large_scale_gains(const Geometry& geo, const PathLossParams& p);

/// gamma = 2^r - 1.
VectorXd rates_to_sinr_targets(const std::vector<double>& rates);
VectorXd tau_vector(const NetworkConfig& cfg);

/// One small-scale realization.
///   w[l], q[l]:      N x LK unit-variance draws on the links from BS l.
///   true_cobf[l]:    h = sqrt(d) w.
///   est_cobf[l]:     h_hat = sqrt(d) (sqrt(1 - tau^2) w + tau q).
///   true_comp/est_comp: NL x LK, block l of column u is the BS-l link.
struct ChannelSet {
  int N = 0;
  int K = 0;
  int L() const { return static_cast<int>(true_cobf.size()); }
  std::vector<MatrixXcd> w;
  std::vector<MatrixXcd> q;
  std::vector<MatrixXcd> true_cobf;
  std::vector<MatrixXcd> est_cobf;
  MatrixXcd true_comp;
  MatrixXcd est_comp;
};

/// Link (l, u) uses the kFading / kError substreams with index l*LK + u.
ChannelSet draw_channels(const LargeScaleGains& gains, const VectorXd& tau,
                         int N, std::uint64_t seed, std::uint64_t trial);

MatrixXcd stack_blocks(const std::vector<MatrixXcd>& per_bs);

}  // namespace bscoop
