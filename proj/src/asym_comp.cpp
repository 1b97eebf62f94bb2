#include "bscoop/asym_comp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "bscoop/linalg.hpp"

namespace bscoop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_inputs(const VectorXd& gamma, const LargeScaleGains& g, int N) {
  if (gamma.size() != g.users()) throw ConfigError("gamma must have one entry per user");
  if (N < 1) throw ConfigError("N must be >= 1");
  if (!gamma.allFinite() || (gamma.array() < 0.0).any())
    throw ConfigError("SINR targets must be finite and >= 0");
}

VectorXd eps_from_mu(const VectorXd& mu, const LargeScaleGains& g) {
  return (g.matrix().transpose() * mu) / g.L();
}

VectorXd mu_map(const VectorXd& eps, const VectorXd& gamma, const LargeScaleGains& g,
                int N) {
  const double NL = static_cast<double>(N) * g.L();
  VectorXd w(g.users());
  for (int i = 0; i < g.users(); ++i) w(i) = gamma(i) / (1.0 + gamma(i)) / eps(i);
  return ((g.matrix() * w).array() / NL + 1.0).inverse();
}

double own_quality(const VectorXd& tau, int u) {
  const double c = 1.0 - tau(u) * tau(u);
  if (!(c > 0.0))
    throw ConfigError("tau = 1 on user " + std::to_string(u) + ": estimate carries no information");
  return c;
}

}  // namespace

VectorXd solve_mu(const VectorXd& gamma, const LargeScaleGains& g, int N,
                  IterationOptions opts) {
  check_inputs(gamma, g, N);
  VectorXd mu = VectorXd::Ones(g.L());
  double diff = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const VectorXd next = mu_map(eps_from_mu(mu, g), gamma, g, N);
    diff = (next - mu).cwiseAbs().maxCoeff();
    mu = next;
    if (diff <= opts.tol) return mu;
  }
  throw ConvergenceError("mu iteration did not converge", diff);
}

double mu_residual(const VectorXd& mu, const VectorXd& gamma, const LargeScaleGains& g,
                   int N) {
  return (mu - mu_map(eps_from_mu(mu, g), gamma, g, N)).cwiseAbs().maxCoeff();
}

double epsilon_trace_residual(const VectorXd& epsilon, const VectorXd& gamma,
                              const LargeScaleGains& g, int N) {
  // T is block diagonal with value t_l on the N antennas of BS l.
  const VectorXd t = mu_map(epsilon, gamma, g, N);
  const double NL = static_cast<double>(N) * g.L();
  double r = 0.0;
  for (int k = 0; k < g.users(); ++k) {
    double tr = 0.0;
    for (int l = 0; l < g.L(); ++l) tr += N * g.comp(l, k) * t(l);
    r = std::max(r, std::abs(epsilon(k) - tr / NL));
  }
  return r;
}

EpsilonWeights epsilon_weights(const VectorXd& mu, const VectorXd& gamma,
                               const LargeScaleGains& g) {
  EpsilonWeights w;
  w.epsilon = eps_from_mu(mu, g);
  w.lambda_bar = gamma.array() / w.epsilon.array();
  return w;
}

EpsPrime build_eps_prime_systems(const VectorXd& mu, const VectorXd& epsilon,
                                 const VectorXd& gamma, const LargeScaleGains& g, int N) {
  check_inputs(gamma, g, N);
  const int KL = g.users();
  const double NL = static_cast<double>(N) * g.L();
  const MatrixXd& d = g.matrix();
  const VectorXd mu2 = mu.array().square();

  EpsPrime ep;
  ep.B = d.transpose() * mu2.asDiagonal() * d / g.L();
  ep.c = d.transpose() * mu2 / g.L();
  VectorXd colw(KL);
  for (int n = 0; n < KL; ++n) {
    const double r = gamma(n) / epsilon(n);
    colw(n) = r * r / (NL * (1.0 + gamma(n)) * (1.0 + gamma(n)));
  }
  ep.J = ep.B * colw.asDiagonal();
  if (spectral_radius(ep.J) >= 1.0)
    throw NumericError("derivative system is degenerate: rho(J) >= 1");
  Eigen::PartialPivLU<MatrixXd> lu(MatrixXd::Identity(KL, KL) - ep.J);
  ep.self = lu.solve(ep.c);
  ep.cross = lu.solve(ep.B);
  if (!ep.self.allFinite() || !ep.cross.allFinite())
    throw NumericError("singular derivative system");
  return ep;
}

double comp_interference_factor(double gamma, double tau) {
  const double s = (1.0 + gamma) * (1.0 + gamma);
  return (1.0 + tau * tau * (s - 1.0)) / s;
}

VectorXd sinr_bar_comp(const VectorXd& p, const VectorXd& epsilon, const EpsPrime& ep,
                       const VectorXd& gamma, const VectorXd& tau, int N, int L,
                       double sigma2) {
  const int KL = static_cast<int>(p.size());
  const double NL = static_cast<double>(N) * L;
  const VectorXd w = p.array() / ep.self.array();
  VectorXd s(KL);
  for (int k = 0; k < KL; ++k) {
    const double interf =
        comp_interference_factor(gamma(k), tau(k)) * ep.cross.col(k).dot(w) / NL;
    s(k) = p(k) * epsilon(k) * epsilon(k) / ep.self(k) * own_quality(tau, k) /
           (interf + sigma2);
  }
  return s;
}

CompZSystem assemble_Z_z(const VectorXd& epsilon, const EpsPrime& ep, const VectorXd& gamma,
                         const VectorXd& tau, int N, int L) {
  const int KL = static_cast<int>(gamma.size());
  const double NL = static_cast<double>(N) * L;
  CompZSystem zs{MatrixXd(KL, KL), VectorXd::Zero(KL)};
  for (int i = 0; i < KL; ++i) {
    const double a = gamma(i) / own_quality(tau, i) / (epsilon(i) * epsilon(i)) / NL;
    const double f = comp_interference_factor(gamma(i), tau(i));
    for (int k = 0; k < KL; ++k) {
      zs.Z(k, i) = a * ep.cross(i, k) * f;
      zs.z(k) += a * ep.cross(i, k);
    }
  }
  return zs;
}

CompPowers solve_powers_comp(const CompZSystem& zs, const VectorXd& epsilon,
                             const EpsPrime& ep, const VectorXd& gamma, const VectorXd& tau,
                             int N, int L, double sigma2) {
  const int KL = static_cast<int>(gamma.size());
  const double NL = static_cast<double>(N) * L;
  CompPowers out;
  if ((zs.z.array() == 0.0).all()) {
    out.Omega_bar = VectorXd::Zero(KL);
  } else {
    auto fail = [&](const std::string& why) {
      double rho = -1.0;
      if (zs.Z.allFinite() && (zs.Z.array() >= 0.0).all()) rho = spectral_radius(zs.Z);
      return InfeasibleError("asymptotic CoMP power solve: " + why + " (spectral radius " +
                                 std::to_string(rho) + ")",
                             rho);
    };
    Eigen::FullPivLU<MatrixXd> lu(MatrixXd::Identity(KL, KL) - zs.Z);
    if (!lu.isInvertible()) throw fail("singular system");
    out.Omega_bar = sigma2 * lu.solve(zs.z);
    for (int k = 0; k < KL; ++k)
      if (!std::isfinite(out.Omega_bar(k)) || out.Omega_bar(k) < 0.0 ||
          (zs.z(k) > 0.0 && !(out.Omega_bar(k) > 0.0)))
        throw fail("negative interference level");
  }
  out.p_bar.resize(KL);
  for (int k = 0; k < KL; ++k)
    out.p_bar(k) = gamma(k) / own_quality(tau, k) * ep.self(k) / (epsilon(k) * epsilon(k)) *
                   (comp_interference_factor(gamma(k), tau(k)) * out.Omega_bar(k) + sigma2);
  out.total = out.p_bar.sum() / NL;
  return out;
}

UserTauMax tau_max_comp(const VectorXd& epsilon, const EpsPrime& ep, const VectorXd& gamma,
                        int N, int L) {
  const int KL = static_cast<int>(gamma.size());
  const double NL = static_cast<double>(N) * L;
  UserTauMax out{VectorXd::Zero(KL), std::vector<bool>(static_cast<std::size_t>(KL), false)};
  for (int i = 0; i < KL; ++i) {
    const double S = ep.cross.row(i).sum() / NL;
    const double A = gamma(i) * S / (epsilon(i) * epsilon(i));
    const double gg = (1.0 + gamma(i)) * (1.0 + gamma(i));
    if (!(A < gg)) {
      out.infeasible_at_zero[static_cast<std::size_t>(i)] = true;
      continue;
    }
    out.tau_max(i) = std::sqrt((gg - A) / (gg + A * (gg - 1.0)));
  }
  return out;
}

CompAsymptotic analyze_comp(const VectorXd& gamma, const LargeScaleGains& g,
                            const VectorXd& tau, int N, double sigma2) {
  if (tau.size() != g.users()) throw ConfigError("tau must have one entry per user");
  CompAsymptotic a;
  const int L = g.L();
  a.mu = solve_mu(gamma, g, N);
  const EpsilonWeights w = epsilon_weights(a.mu, gamma, g);
  a.epsilon = w.epsilon;
  a.lambda_bar = w.lambda_bar;
  a.eps_prime = build_eps_prime_systems(a.mu, a.epsilon, gamma, g, N);
  const CompZSystem zs = assemble_Z_z(a.epsilon, a.eps_prime, gamma, tau, N, L);
  a.Z = zs.Z;
  a.z_vec = zs.z;
  a.spectral_radius = spectral_radius(zs.Z);
  const VectorXd cols = zs.Z.colwise().sum().transpose();
  a.column_sum_condition = (cols.array() <= 1.0).all() && (cols.array() < 1.0).any();
  try {
    const CompPowers pw =
        solve_powers_comp(zs, a.epsilon, a.eps_prime, gamma, tau, N, L, sigma2);
    a.Omega_bar = pw.Omega_bar;
    a.p_bar = pw.p_bar;
    a.total_power = pw.total;
    a.feasible = a.spectral_radius < 1.0;
  } catch (const InfeasibleError&) {
    a.feasible = false;
  }
  if (!a.feasible) {
    a.Omega_bar = VectorXd::Constant(g.users(), kNaN);
    a.p_bar = VectorXd::Constant(g.users(), kNaN);
    a.total_power = kNaN;
  }
  return a;
}

}  // namespace bscoop
