#include "bscoop/model.hpp"

#include <cmath>
#include <string>

#include "bscoop/rng.hpp"

namespace bscoop {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

int grid_side(int L) {
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(L))));
  return s * s == L ? s : -1;
}

}  // namespace

void NetworkConfig::validate() const {
  if (L < 1 || K < 1 || N < 1) throw ConfigError("L, K, N must be >= 1");
  if (!(side_m > 0.0)) throw ConfigError("region_side_m must be > 0");
  if (!(kappa > 2.0)) throw ConfigError("path_loss_exponent must be > 2");
  if (!(x_cutoff_m > 0.0)) throw ConfigError("cutoff_distance_m must be > 0");
  if (!(sigma2_w > 0.0)) throw ConfigError("noise power must be > 0");
  if (!(min_ue_distance_m >= 0.0)) throw ConfigError("min_ue_distance_m must be >= 0");
  if (bs_positions_m.empty()) {
    if (grid_side(L) < 0)
      throw ConfigError("cells=" + std::to_string(L) +
                        " is not a perfect square; give bs_positions_m");
  } else {
    if (static_cast<int>(bs_positions_m.size()) != L)
      throw ConfigError("bs_positions_m must have one entry per cell");
    if (!(cell_side_m > 0.0)) throw ConfigError("cell_side_m must be > 0 with bs_positions_m");
  }
  if (static_cast<int>(rates.size()) != users())
    throw ConfigError("rates must have L*K entries");
  if (static_cast<int>(tau.size()) != users())
    throw ConfigError("tau must have L*K entries");
  for (double r : rates)
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("rates must be finite and >= 0");
  for (double t : tau)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
}

void NetworkConfig::set_uniform_rate(double r) { rates.assign(users(), r); }

void NetworkConfig::set_uniform_tau2(double tau2) {
  if (!(tau2 >= 0.0 && tau2 <= 1.0)) throw ConfigError("tau2 must lie in [0, 1]");
  tau.assign(users(), std::sqrt(tau2));
}

PathLossParams path_loss_params(const NetworkConfig& cfg) {
  return {cfg.kappa, cfg.L_cutoff_db, cfg.x_cutoff_m};
}

double path_loss(Point offset, const PathLossParams& p) {
  const double r = std::hypot(offset.x, offset.y);
  return 2.0 * db_to_linear(p.L_cutoff_db) / (1.0 + std::pow(r / p.x_cutoff_m, p.kappa));
}

Geometry base_geometry(const NetworkConfig& cfg) {
  Geometry g;
  g.L = cfg.L;
  g.K = cfg.K;
  if (cfg.bs_positions_m.empty()) {
    const int s = grid_side(cfg.L);
    if (s < 0) throw ConfigError("non-square cell count without explicit BS positions");
    g.cell_side = cfg.side_m / s;
    for (int row = 0; row < s; ++row)
      for (int col = 0; col < s; ++col) {
        Point lo{col * g.cell_side, row * g.cell_side};
        g.cell_lo.push_back(lo);
        g.bs.push_back({lo.x + g.cell_side / 2, lo.y + g.cell_side / 2});
      }
  } else {
    if (static_cast<int>(cfg.bs_positions_m.size()) != cfg.L)
      throw ConfigError("bs_positions_m must have one entry per cell");
    g.cell_side = cfg.cell_side_m;
    g.bs = cfg.bs_positions_m;
    for (const Point& b : g.bs)
      g.cell_lo.push_back({b.x - g.cell_side / 2, b.y - g.cell_side / 2});
  }
  return g;
}

Geometry build_geometry(const NetworkConfig& cfg, std::uint64_t trial) {
  Geometry g = base_geometry(cfg);
  g.ue.resize(static_cast<std::size_t>(cfg.users()));
  for (int j = 0; j < cfg.L; ++j)
    for (int k = 0; k < cfg.K; ++k) {
      const int u = j * cfg.K + k;
      Substream rng(cfg.seed, trial, StreamTag::kDrop, static_cast<std::uint64_t>(u));
      const Point lo = g.cell_lo[j];
      const Point bs = g.bs[j];
      for (int attempt = 0;; ++attempt) {
        if (attempt == 100000)
          throw ConfigError("min_ue_distance_m leaves no room inside the cell");
        Point p{lo.x + g.cell_side * rng.uniform(), lo.y + g.cell_side * rng.uniform()};
        if (std::hypot(p.x - bs.x, p.y - bs.y) >= cfg.min_ue_distance_m) {
          g.ue[u] = p;
          break;
        }
      }
    }
  return g;
}

LargeScaleGains::LargeScaleGains(MatrixXd d, int K) : d_(std::move(d)), K_(K) {
  if (K_ < 1 || d_.cols() % K_ != 0 || d_.cols() / K_ != d_.rows())
    throw ConfigError("gain matrix must be L x LK");
  if (!(d_.array() >= 0.0).all() || !d_.allFinite())
    throw ConfigError("gains must be finite and nonnegative");
  for (int u = 0; u < users(); ++u)
    if (!(own(u) > 0.0)) throw ConfigError("serving-BS gains must be positive");
}

LargeScaleGains large_scale_gains(const Geometry& geo, const PathLossParams& p) {
  const int LK = geo.L * geo.K;
  MatrixXd d(geo.L, LK);
  for (int l = 0; l < geo.L; ++l)
    for (int u = 0; u < LK; ++u)
      d(l, u) = path_loss({geo.ue[u].x - geo.bs[l].x, geo.ue[u].y - geo.bs[l].y}, p);
  return LargeScaleGains(std::move(d), geo.K);
}

VectorXd rates_to_sinr_targets(const std::vector<double>& rates) {
  VectorXd g(static_cast<Eigen::Index>(rates.size()));
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0.0)) throw ConfigError("rates must be >= 0");
    g(static_cast<Eigen::Index>(i)) = std::exp2(rates[i]) - 1.0;
  }
  return g;
}

VectorXd tau_vector(const NetworkConfig& cfg) {
  return Eigen::Map<const VectorXd>(cfg.tau.data(), static_cast<Eigen::Index>(cfg.tau.size()));
}

MatrixXcd stack_blocks(const std::vector<MatrixXcd>& per_bs) {
  if (per_bs.empty()) return {};
  const Eigen::Index N = per_bs.front().rows();
  MatrixXcd out(N * static_cast<Eigen::Index>(per_bs.size()), per_bs.front().cols());
  for (std::size_t l = 0; l < per_bs.size(); ++l)
    out.middleRows(static_cast<Eigen::Index>(l) * N, N) = per_bs[l];
  return out;
}

ChannelSet draw_channels(const LargeScaleGains& gains, const VectorXd& tau, int N,
                         std::uint64_t seed, std::uint64_t trial) {
  const int L = gains.L();
  const int LK = gains.users();
  if (tau.size() != LK) throw ConfigError("tau must have one entry per user");
  if (N < 1) throw ConfigError("N must be >= 1");
  ChannelSet cs;
  cs.N = N;
  cs.K = gains.K();
  for (int l = 0; l < L; ++l) {
    MatrixXcd w(N, LK), q(N, LK), h(N, LK), hh(N, LK);
    for (int u = 0; u < LK; ++u) {
      const auto idx = static_cast<std::uint64_t>(l) * LK + u;
      Substream fading(seed, trial, StreamTag::kFading, idx);
      Substream error(seed, trial, StreamTag::kError, idx);
      for (int n = 0; n < N; ++n) w(n, u) = fading.complex_normal();
      for (int n = 0; n < N; ++n) q(n, u) = error.complex_normal();
      const double t = tau(u);
      if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
      const double sd = std::sqrt(gains.comp(l, u));
      h.col(u) = sd * w.col(u);
      hh.col(u) = sd * (std::sqrt(1.0 - t * t) * w.col(u) + t * q.col(u));
    }
    cs.w.push_back(std::move(w));
    cs.q.push_back(std::move(q));
    cs.true_cobf.push_back(std::move(h));
    cs.est_cobf.push_back(std::move(hh));
  }
  cs.true_comp = stack_blocks(cs.true_cobf);
  cs.est_comp = stack_blocks(cs.est_cobf);
  return cs;
}

}  // namespace bscoop
