#pragma once

#include "bscoop/model.hpp"

namespace bscoop::test {

/// Two side-by-side 250 m cells, BSs at the cell centers.
inline NetworkConfig two_cell_network(int K, int N, double rate, double tau2,
                                      std::uint64_t seed = 2024) {
  NetworkConfig c;
  c.L = 2;
  c.K = K;
  c.N = N;
  c.bs_positions_m = {{125.0, 125.0}, {375.0, 125.0}};
  c.cell_side_m = 250.0;
  c.set_uniform_rate(rate);
  c.set_uniform_tau2(tau2);
  c.seed = seed;
  return c;
}

/// Every BS reaches every user with gain d.
inline LargeScaleGains equal_gains(int L, int K, double d = 1.0) {
  return LargeScaleGains(MatrixXd::Constant(L, L * K, d), K);
}

inline LargeScaleGains drop_gains(const NetworkConfig& c, std::uint64_t trial = 0) {
  return large_scale_gains(build_geometry(c, trial), path_loss_params(c));
}

}  // namespace bscoop::test
