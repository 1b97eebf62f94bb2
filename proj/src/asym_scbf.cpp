#include "bscoop/asym_scbf.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bscoop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_inputs(const VectorXd& gamma, int users, int N) {
  if (gamma.size() != users) throw ConfigError("gamma must have one entry per user");
  if (N < 1) throw ConfigError("N must be >= 1");
  if (!gamma.allFinite() || (gamma.array() < 0.0).any())
    throw ConfigError("SINR targets must be finite and >= 0");
}

int cells(const VectorXd& gamma, int K) {
  if (K < 1 || gamma.size() % K != 0) throw ConfigError("gamma length is not a multiple of K");
  return static_cast<int>(gamma.size()) / K;
}

}  // namespace

Assumption4 check_assumption4(const VectorXd& gamma, int K, int N) {
  Assumption4 a;
  a.slack = varsigma(gamma, K, N);
  a.ok = (a.slack.array() > 0.0).all();
  return a;
}

VectorXd varsigma(const VectorXd& gamma, int K, int N) {
  const int L = cells(gamma, K);
  check_inputs(gamma, L * K, N);
  VectorXd v = VectorXd::Ones(L);
  for (int u = 0; u < L * K; ++u) v(u / K) -= gamma(u) / (1.0 + gamma(u)) / N;
  return v;
}

VectorXd lambda_bar_scbf(const VectorXd& vs, const VectorXd& gamma,
                         const LargeScaleGains& g) {
  VectorXd lam(g.users());
  for (int u = 0; u < g.users(); ++u) lam(u) = gamma(u) / (vs(g.cell_of(u)) * g.own(u));
  return lam;
}

MatrixXd alpha_coeffs(const VectorXd& gamma, const LargeScaleGains& g, const VectorXd& tau) {
  if (tau.size() != g.users()) throw ConfigError("tau must have one entry per user");
  MatrixXd a = g.matrix();
  for (int u = 0; u < g.users(); ++u) {
    const double t2 = tau(u) * tau(u);
    const double s = 1.0 + gamma(u);
    a(g.cell_of(u), u) = g.own(u) * ((1.0 - t2) / (s * s) + t2);
  }
  return a;
}

VectorXd delta_diagonal(const VectorXd& gamma, int K, int N) {
  const int L = cells(gamma, K);
  check_inputs(gamma, L * K, N);
  VectorXd d = VectorXd::Ones(L);
  for (int u = 0; u < L * K; ++u) {
    const double r = gamma(u) / (1.0 + gamma(u));
    d(u / K) -= r * r / N;
  }
  return d;
}

CellPowerSystem assemble_Delta_U(const VectorXd& gamma, const LargeScaleGains& g,
                                 const VectorXd& tau, int N) {
  check_inputs(gamma, g.users(), N);
  return assemble_cell_system(delta_diagonal(gamma, g.K(), N), alpha_coeffs(gamma, g, tau),
                              gamma, g, tau, N);
}

CellPowers solve_powers_scbf(const CellPowerSystem& sys, const MatrixXd& alpha,
                             const VectorXd& gamma, const LargeScaleGains& g,
                             const VectorXd& tau, double sigma2) {
  return solve_cell_powers(sys, alpha, gamma, g, tau, sigma2);
}

VectorXd sinr_bar_scbf(const VectorXd& p, const MatrixXd& alpha, const VectorXd& Delta_diag,
                       const LargeScaleGains& g, const VectorXd& tau, int N, double sigma2) {
  return cell_sinr_bar(p, alpha, Delta_diag, g, tau, N, sigma2);
}

VectorXd relative_interference(const LargeScaleGains& g) {
  VectorXd R(g.users());
  for (int u = 0; u < g.users(); ++u)
    R(u) = (g.matrix().col(u).sum() - g.own(u)) / g.own(u);
  return R;
}

namespace {

// Shared numerator 1 - (1/N) sum (gamma/(1+gamma) + gamma R) and the two
// candidate denominators per cell.
struct ScbfTauTerms {
  VectorXd num;
  VectorXd published_den;
  VectorXd exact_den;
};

ScbfTauTerms scbf_tau_terms(const VectorXd& gamma, const LargeScaleGains& g, int N) {
  check_inputs(gamma, g.users(), N);
  const VectorXd R = relative_interference(g);
  const int L = g.L();
  ScbfTauTerms t{VectorXd::Ones(L), VectorXd::Ones(L), VectorXd::Ones(L)};
  for (int u = 0; u < g.users(); ++u) {
    const int j = g.cell_of(u);
    const double gm = gamma(u);
    t.num(j) -= (gm / (1.0 + gm) + gm * R(u)) / N;
    t.published_den(j) -= gm * gm / (1.0 + gm) / N;
    t.exact_den(j) += gm * gm / (1.0 + gm) / N;
  }
  return t;
}

TauMax tau_from_ratio(const VectorXd& num, const VectorXd& den) {
  const auto L = num.size();
  TauMax out{VectorXd::Zero(L), std::vector<bool>(static_cast<std::size_t>(L), false)};
  for (Eigen::Index j = 0; j < L; ++j) {
    const double r = num(j) / den(j);
    if (!(num(j) > 0.0) || !(den(j) > 0.0) || !(r >= 0.0)) {
      out.infeasible_at_zero[static_cast<std::size_t>(j)] = true;
      continue;
    }
    out.tau_max(j) = std::min(1.0, std::sqrt(r));
  }
  return out;
}

}  // namespace

TauMax tau_max_scbf(const VectorXd& gamma, const LargeScaleGains& g, int N) {
  const ScbfTauTerms t = scbf_tau_terms(gamma, g, N);
  return tau_from_ratio(t.num, t.published_den);
}

TauMax tau_boundary_scbf(const VectorXd& gamma, const LargeScaleGains& g, int N) {
  const ScbfTauTerms t = scbf_tau_terms(gamma, g, N);
  return tau_from_ratio(t.num, t.exact_den);
}

VectorXd scbf_load_A(const LargeScaleGains& g, const VectorXd& tau, int N) {
  if (tau.size() != g.users()) throw ConfigError("tau must have one entry per user");
  const VectorXd R = relative_interference(g);
  VectorXd A = VectorXd::Zero(g.L());
  for (int u = 0; u < g.users(); ++u) {
    const double t2 = tau(u) * tau(u);
    if (!(t2 < 1.0)) throw ConfigError("tau = 1: estimate carries no information");
    A(g.cell_of(u)) += (t2 + R(u)) / (1.0 - t2) / N;
  }
  return A;
}

GammaMax gamma_max_scbf(const VectorXd& tau, const LargeScaleGains& g, int N) {
  const VectorXd A = scbf_load_A(g, tau, N);
  const double kn = static_cast<double>(g.K()) / N;
  const int L = g.L();
  GammaMax out{VectorXd::Zero(L), std::vector<bool>(static_cast<std::size_t>(L), false)};
  for (int j = 0; j < L; ++j) {
    if (A(j) == 0.0) {
      out.gamma_max(j) = kn <= 1.0 ? std::numeric_limits<double>::infinity()
                                   : 1.0 / (kn - 1.0);
      continue;
    }
    const double B = A(j) + kn - 1.0;
    // Cancellation-free form of (-B + sqrt(B^2 + 4A)) / (2A).
    const double disc = std::sqrt(B * B + 4.0 * A(j));
    out.gamma_max(j) = B >= 0.0 ? 2.0 / (B + disc) : (disc - B) / (2.0 * A(j));
  }
  return out;
}

ScbfAsymptotic analyze_scbf(const VectorXd& gamma, const LargeScaleGains& g,
                            const VectorXd& tau, int N, double sigma2) {
  ScbfAsymptotic a;
  a.assumption4 = check_assumption4(gamma, g.K(), N);
  a.varsigma = a.assumption4.slack;
  a.lambda_bar = lambda_bar_scbf(a.varsigma, gamma, g);
  a.alpha = alpha_coeffs(gamma, g, tau);
  const CellPowerSystem sys = assemble_cell_system(delta_diagonal(gamma, g.K(), N), a.alpha,
                                                   gamma, g, tau, N);
  a.Delta = sys.diag;
  a.U = sys.coupling;
  a.b = sys.b;
  const Feasibility f = cell_feasibility(sys);
  a.spectral_radius = f.spectral_radius;
  a.row_sum_condition = f.row_sum_condition;
  try {
    const CellPowers pw = solve_cell_powers(sys, a.alpha, gamma, g, tau, sigma2);
    a.P_bar = pw.P_bar;
    a.p_bar = pw.p_bar;
    a.total_power = pw.total;
    a.feasible = f.feasible && a.assumption4.ok;
  } catch (const InfeasibleError&) {
    a.feasible = false;
  }
  if (!a.feasible) {
    a.P_bar = VectorXd::Constant(g.L(), kNaN);
    a.p_bar = VectorXd::Constant(g.users(), kNaN);
    a.total_power = kNaN;
  }
  a.tau_max = tau_max_scbf(gamma, g, N).tau_max;
  a.gamma_max = gamma_max_scbf(tau, g, N).gamma_max;
  return a;
}

}  // namespace bscoop
