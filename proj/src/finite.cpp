#include "bscoop/finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

namespace bscoop {

double scheme_scale(Scheme s, int N, int L) {
  return s == Scheme::kComp ? static_cast<double>(N) * L : static_cast<double>(N);
}

std::vector<Transmitter> transmitters(Scheme s, const ChannelSet& ch) {
  const int L = ch.L();
  const int K = ch.K;
  const int LK = L * K;
  std::vector<Transmitter> out;
  if (s == Scheme::kComp) {
    Transmitter t{ch.est_comp, {}, {}};
    for (int u = 0; u < LK; ++u) {
      t.columns.push_back(u);
      t.served.push_back(u);
    }
    out.push_back(std::move(t));
    return out;
  }
  for (int j = 0; j < L; ++j) {
    Transmitter t;
    if (s == Scheme::kScbf) {
      t.H = ch.est_cobf[j].middleCols(j * K, K);
      for (int k = 0; k < K; ++k) {
        t.columns.push_back(j * K + k);
        t.served.push_back(k);
      }
    } else {
      t.H = ch.est_cobf[j];
      for (int u = 0; u < LK; ++u) t.columns.push_back(u);
      for (int k = 0; k < K; ++k) t.served.push_back(j * K + k);
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

VectorXd gather(const VectorXd& v, const std::vector<int>& idx) {
  VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

void check_sizes(const ChannelSet& ch, const VectorXd& v, const char* what) {
  if (v.size() != ch.L() * ch.K)
    throw ConfigError(std::string(what) + " must have one entry per user");
}

}  // namespace

VectorXd fixed_point_map(Scheme s, const ChannelSet& ch, const VectorXd& gamma,
                         const VectorXd& lambda, SolvePath path) {
  check_sizes(ch, gamma, "gamma");
  check_sizes(ch, lambda, "lambda");
  const double scale = scheme_scale(s, ch.N, ch.L());
  VectorXd out = VectorXd::Zero(lambda.size());
  for (const Transmitter& t : transmitters(s, ch)) {
    const MatrixXcd A = regularized_images(t.H, gather(lambda, t.columns) / scale, path);
    for (int c : t.served) {
      const int u = t.columns[c];
      if (gamma(u) == 0.0) continue;
      const double quad = std::real(t.H.col(c).dot(A.col(c))) / scale;
      if (!(quad > 0.0)) throw NumericError("degenerate estimated channel");
      out(u) = gamma(u) / (1.0 + gamma(u)) / quad;
    }
  }
  return out;
}

double fixed_point_residual(Scheme s, const ChannelSet& ch, const VectorXd& gamma,
                            const VectorXd& lambda) {
  const VectorXd next = fixed_point_map(s, ch, gamma, lambda);
  double r = 0.0;
  for (Eigen::Index u = 0; u < next.size(); ++u) {
    const double den = std::max(std::abs(next(u)), std::numeric_limits<double>::min());
    if (next(u) != lambda(u)) r = std::max(r, std::abs(next(u) - lambda(u)) / den);
  }
  return r;
}

MultiplierResult fixed_point_multipliers(Scheme s, const ChannelSet& ch,
                                         const VectorXd& gamma,
                                         const FixedPointOptions& opts) {
  check_sizes(ch, gamma, "gamma");
  if (!gamma.allFinite() || (gamma.array() < 0.0).any())
    throw ConfigError("SINR targets must be finite and >= 0");
  const double scale = scheme_scale(s, ch.N, ch.L());
  const int LK = static_cast<int>(gamma.size());

  VectorXd lambda(LK);
  for (int u = 0; u < LK; ++u) {
    const double nrm2 = s == Scheme::kComp ? ch.est_comp.col(u).squaredNorm()
                                           : ch.est_cobf[u / ch.K].col(u).squaredNorm();
    const double guess = gamma(u) * scale / nrm2;
    lambda(u) = std::isfinite(guess) ? guess : 1.0;
  }

  MultiplierResult res;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const VectorXd next = fixed_point_map(s, ch, gamma, lambda, opts.path);
    double r = 0.0;
    for (int u = 0; u < LK; ++u)
      if (next(u) != lambda(u)) r = std::max(r, std::abs(next(u) - lambda(u)) / next(u));
    lambda = next;
    res.residual = r;
    if (!std::isfinite(r)) throw NumericError("non-finite multiplier iterate");
    if (r <= opts.tol) {
      res.lambda = lambda;
      res.iterations = it;
      return res;
    }
  }
  throw ConvergenceError("multiplier fixed point did not converge in " +
                             std::to_string(opts.max_iter) + " iterations",
                         res.residual);
}

MatrixXcd beamform_directions(Scheme s, const ChannelSet& ch, const VectorXd& lambda,
                              SolvePath path) {
  check_sizes(ch, lambda, "lambda");
  const double scale = scheme_scale(s, ch.N, ch.L());
  const auto txs = transmitters(s, ch);
  MatrixXcd V(txs.front().H.rows(), lambda.size());
  for (const Transmitter& t : txs) {
    const MatrixXcd A = regularized_images(t.H, gather(lambda, t.columns) / scale, path);
    for (int c : t.served) {
      const double nrm = A.col(c).norm();
      if (!(nrm > 0.0)) throw NumericError("zero beamforming direction");
      V.col(t.columns[c]) = A.col(c) / nrm;
    }
  }
  return V;
}

MatrixXd CrossGainMatrix::interference() const {
  MatrixXd I = G;
  I.diagonal().setZero();
  return I;
}

CrossGainMatrix realized_gain_matrix(Scheme s, const ChannelSet& ch,
                                     const MatrixXcd& directions) {
  const int L = ch.L();
  const int K = ch.K;
  const int LK = L * K;
  if (directions.cols() != LK) throw ConfigError("one direction per user required");
  const double scale = scheme_scale(s, ch.N, L);
  const VectorXd nrm2 = directions.colwise().squaredNorm().transpose();
  CrossGainMatrix out{MatrixXd(LK, LK)};
  if (s == Scheme::kComp) {
    out.G = (ch.true_comp.adjoint() * directions).cwiseAbs2();
  } else {
    for (int l = 0; l < L; ++l)
      out.G.middleCols(l * K, K) =
          (ch.true_cobf[l].adjoint() * directions.middleCols(l * K, K)).cwiseAbs2();
  }
  for (int t = 0; t < LK; ++t) out.G.col(t) /= scale * nrm2(t);
  return out;
}

VectorXd solve_powers_finite(const CrossGainMatrix& gains, const VectorXd& gamma,
                             double sigma2) {
  const MatrixXd& G = gains.G;
  const Eigen::Index n = G.rows();
  if (gamma.size() != n) throw ConfigError("gamma does not match gain matrix");
  std::vector<Eigen::Index> act;
  for (Eigen::Index u = 0; u < n; ++u)
    if (gamma(u) > 0.0) act.push_back(u);
  VectorXd p = VectorXd::Zero(n);
  if (act.empty()) return p;

  const auto m = static_cast<Eigen::Index>(act.size());
  MatrixXd A(m, m);
  MatrixXd C = MatrixXd::Zero(m, m);  // diag(gamma/G_rr) * interference
  VectorXd rhs(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const Eigen::Index r = act[a];
    for (Eigen::Index b = 0; b < m; ++b) {
      const Eigen::Index t = act[b];
      A(a, b) = a == b ? G(r, r) / gamma(r) : -G(r, t);
      if (a != b) C(a, b) = gamma(r) * G(r, t) / G(r, r);
    }
    rhs(a) = sigma2;
  }
  auto fail = [&](const std::string& why) {
    double rho = -1.0;
    if (C.allFinite()) rho = spectral_radius(C);
    return InfeasibleError("finite power solve: " + why, rho);
  };
  if (!A.allFinite()) throw fail("non-finite gains");
  Eigen::FullPivLU<MatrixXd> lu(A);
  if (!lu.isInvertible()) throw fail("singular SINR system");
  const VectorXd x = lu.solve(rhs);
  if (!x.allFinite() || (x.array() <= 0.0).any()) throw fail("non-positive power");
  for (Eigen::Index a = 0; a < m; ++a) p(act[a]) = x(a);
  return p;
}

VectorXd realized_sinr(const CrossGainMatrix& gains, const VectorXd& p, double sigma2) {
  const MatrixXd& G = gains.G;
  VectorXd sinr(G.rows());
  for (Eigen::Index r = 0; r < G.rows(); ++r) {
    const double signal = p(r) * G(r, r);
    const double interf = G.row(r).dot(p) - signal;
    sinr(r) = signal / (interf + sigma2);
  }
  return sinr;
}

double total_power(const VectorXd& p, double scale) {
  return p.size() == 0 ? 0.0 : p.sum() / scale;
}

VectorXd bs_powers(Scheme s, const VectorXd& p, const MatrixXcd& directions, int N,
                   int L, int K) {
  VectorXd out = VectorXd::Zero(L);
  const double scale = scheme_scale(s, N, L);
  for (int u = 0; u < L * K; ++u) {
    if (s != Scheme::kComp) {
      out(u / K) += p(u) / scale;
      continue;
    }
    const double nrm2 = directions.col(u).squaredNorm();
    for (int l = 0; l < L; ++l)
      out(l) += p(u) * directions.col(u).segment(static_cast<Eigen::Index>(l) * N, N).squaredNorm() /
                (scale * nrm2);
  }
  return out;
}

FiniteSolution solve_finite(Scheme s, const ChannelSet& ch, const VectorXd& gamma,
                            double sigma2, const FixedPointOptions& opts) {
  FiniteSolution sol;
  sol.scheme = s;
  const MultiplierResult mr = fixed_point_multipliers(s, ch, gamma, opts);
  sol.lambda = mr.lambda;
  sol.iterations = mr.iterations;
  sol.directions = beamform_directions(s, ch, sol.lambda, opts.path);
  sol.gains = realized_gain_matrix(s, ch, sol.directions);
  sol.powers = solve_powers_finite(sol.gains, gamma, sigma2);
  sol.realized_sinr = realized_sinr(sol.gains, sol.powers, sigma2);
  sol.total_power = total_power(sol.powers, scheme_scale(s, ch.N, ch.L()));
  sol.bs_power = bs_powers(s, sol.powers, sol.directions, ch.N, ch.L(), ch.K);
  return sol;
}

}  // namespace bscoop
