#include "bscoop/asym_cobf.hpp"

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

double own_quality(const LargeScaleGains& g, const VectorXd& tau, int u) {
  const double c = 1.0 - tau(u) * tau(u);
  if (!(c > 0.0))
    throw ConfigError("tau = 1 on user " + std::to_string(u) + ": estimate carries no information");
  return g.own(u) * c;
}

}  // namespace

MatrixXd coupling_loads(const VectorXd& eta, const VectorXd& gamma,
                        const LargeScaleGains& g) {
  MatrixXd x(g.L(), g.users());
  for (int j = 0; j < g.L(); ++j)
    for (int u = 0; u < g.users(); ++u)
      x(j, u) = gamma(u) * g.comp(j, u) / g.own(u) * eta(j) / eta(g.cell_of(u));
  return x;
}

VectorXd solve_eta(const VectorXd& gamma, const LargeScaleGains& g, int N,
                   IterationOptions opts) {
  check_inputs(gamma, g, N);
  const int L = g.L();
  VectorXd eta = VectorXd::Ones(L);
  double diff = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    VectorXd next(L);
    for (int j = 0; j < L; ++j) {
      double s = 0.0;
      for (int u = 0; u < g.users(); ++u) {
        const double r = g.comp(j, u) / g.own(u);
        const double el = eta(g.cell_of(u));
        s += gamma(u) * r / el / (1.0 + gamma(u) * r * eta(j) / el);
      }
      next(j) = 1.0 / (s / N + 1.0);
    }
    diff = (next - eta).cwiseAbs().maxCoeff();
    eta = next;
    if (diff <= opts.tol) return eta;
  }
  throw ConvergenceError("eta iteration did not converge", diff);
}

double eta_residual_reciprocal(const VectorXd& eta, const VectorXd& gamma,
                               const LargeScaleGains& g, int N) {
  double r = 0.0;
  for (int j = 0; j < g.L(); ++j) {
    double s = 0.0;
    for (int u = 0; u < g.users(); ++u) {
      const double ratio = g.comp(j, u) / g.own(u);
      const double el = eta(g.cell_of(u));
      s += gamma(u) * ratio / el / (1.0 + gamma(u) * ratio * eta(j) / el);
    }
    r = std::max(r, std::abs(eta(j) - 1.0 / (s / N + 1.0)));
  }
  return r;
}

double eta_residual_complement(const VectorXd& eta, const VectorXd& gamma,
                               const LargeScaleGains& g, int N) {
  const MatrixXd x = coupling_loads(eta, gamma, g);
  double r = 0.0;
  for (int j = 0; j < g.L(); ++j) {
    const double s = (x.row(j).array() / (1.0 + x.row(j).array())).sum();
    r = std::max(r, std::abs(eta(j) - (1.0 - s / N)));
  }
  return r;
}

VectorXd eta_at_z(const VectorXd& eta, const VectorXd& gamma, const LargeScaleGains& g,
                  int N, double z, IterationOptions opts) {
  check_inputs(gamma, g, N);
  if (!(z < 1.0)) throw ConfigError("z must be < 1");
  const int L = g.L();
  VectorXd e(L);
  for (int j = 0; j < L; ++j) {
    VectorXd a(g.users());
    for (int u = 0; u < g.users(); ++u)
      a(u) = gamma(u) / (eta(g.cell_of(u)) * g.own(u)) * g.comp(j, u);
    // f(v) = v (sum a/(1+av)/N + 1 - z) - 1 is increasing and concave.
    double v = eta(j);
    double step = 0.0;
    for (int it = 0; it < opts.max_iter; ++it) {
      const Eigen::ArrayXd den = 1.0 + a.array() * v;
      const double f = v * ((a.array() / den).sum() / N + 1.0 - z) - 1.0;
      const double fp = (a.array() / den.square()).sum() / N + 1.0 - z;
      step = f / fp;
      v -= step;
      if (std::abs(step) <= opts.tol * std::abs(v)) break;
    }
    if (!(std::abs(step) <= opts.tol * std::abs(v)))
      throw ConvergenceError("resolvent trace iteration did not converge", std::abs(step));
    e(j) = v;
  }
  return e;
}

VectorXd gamma_diagonal(const VectorXd& eta, const VectorXd& gamma,
                        const LargeScaleGains& g, int N) {
  const MatrixXd x = coupling_loads(eta, gamma, g);
  VectorXd d(g.L());
  for (int j = 0; j < g.L(); ++j)
    d(j) = 1.0 - (x.row(j).array() / (1.0 + x.row(j).array())).square().sum() / N;
  return d;
}

VectorXd eta_prime(const VectorXd& eta, const VectorXd& gamma, const LargeScaleGains& g,
                   int N) {
  const VectorXd den = gamma_diagonal(eta, gamma, g, N);
  if ((den.array() <= 0.0).any())
    throw InfeasibleError("nonpositive denominator in the eta derivative");
  return eta.array().square() / den.array();
}

VectorXd lambda_bar_cobf(const VectorXd& eta, const VectorXd& gamma,
                         const LargeScaleGains& g) {
  VectorXd lam(g.users());
  for (int u = 0; u < g.users(); ++u) lam(u) = gamma(u) / (eta(g.cell_of(u)) * g.own(u));
  return lam;
}

MatrixXd beta_coeffs(const VectorXd& eta, const VectorXd& gamma, const LargeScaleGains& g,
                     const VectorXd& tau) {
  if (tau.size() != g.users()) throw ConfigError("tau must have one entry per user");
  const MatrixXd x = coupling_loads(eta, gamma, g);
  MatrixXd beta(g.L(), g.users());
  for (int l = 0; l < g.L(); ++l)
    for (int u = 0; u < g.users(); ++u) {
      const double t2 = tau(u) * tau(u);
      const double s = 1.0 + x(l, u);
      beta(l, u) = g.comp(l, u) * ((1.0 - t2) / (s * s) + t2);
    }
  return beta;
}

CellPowerSystem assemble_cell_system(const VectorXd& diag, const MatrixXd& coeff,
                                     const VectorXd& gamma, const LargeScaleGains& g,
                                     const VectorXd& tau, int N) {
  const int L = g.L();
  CellPowerSystem sys{MatrixXd(diag.asDiagonal()), MatrixXd::Zero(L, L), VectorXd::Zero(L)};
  for (int u = 0; u < g.users(); ++u) {
    const int j = g.cell_of(u);
    const double w = gamma(u) / own_quality(g, tau, u) / N;
    sys.b(j) += w;
    for (int l = 0; l < L; ++l) sys.coupling(j, l) += w * coeff(l, u);
  }
  return sys;
}

CellPowerSystem assemble_power_system(const VectorXd& eta, const VectorXd& gamma,
                                      const LargeScaleGains& g, const VectorXd& tau, int N) {
  check_inputs(gamma, g, N);
  return assemble_cell_system(gamma_diagonal(eta, gamma, g, N),
                              beta_coeffs(eta, gamma, g, tau), gamma, g, tau, N);
}

Feasibility cell_feasibility(const CellPowerSystem& sys) {
  Feasibility f;
  const VectorXd d = sys.diag.diagonal();
  if ((d.array() <= 0.0).any() || !d.allFinite()) {
    f.spectral_radius = std::numeric_limits<double>::infinity();
    return f;
  }
  const MatrixXd M = d.cwiseInverse().asDiagonal() * sys.coupling;
  f.spectral_radius = spectral_radius(M);
  f.feasible = f.spectral_radius < 1.0;
  const VectorXd rows = sys.coupling.rowwise().sum();
  f.row_sum_condition = (rows.array() <= d.array()).all() && (rows.array() < d.array()).any();
  return f;
}

Feasibility cobf_feasibility(const MatrixXd& Gamma, const MatrixXd& F) {
  return cell_feasibility({Gamma, F, VectorXd::Zero(Gamma.rows())});
}

CellPowers solve_cell_powers(const CellPowerSystem& sys, const MatrixXd& coeff,
                             const VectorXd& gamma, const LargeScaleGains& g,
                             const VectorXd& tau, double sigma2) {
  const int L = g.L();
  CellPowers out;
  if ((sys.b.array() == 0.0).all()) {
    out.P_bar = VectorXd::Zero(L);
    out.p_bar = VectorXd::Zero(g.users());
    return out;
  }
  const MatrixXd A = sys.diag - sys.coupling;
  Eigen::FullPivLU<MatrixXd> lu(A);
  auto fail = [&](const std::string& why) {
    double rho = -1.0;
    try {
      rho = cell_feasibility(sys).spectral_radius;
    } catch (const std::exception&) {
    }
    return InfeasibleError("asymptotic power solve: " + why + " (spectral radius " +
                               std::to_string(rho) + ")",
                           rho);
  };
  if ((sys.diag.diagonal().array() <= 0.0).any()) throw fail("nonpositive diagonal");
  if (!lu.isInvertible()) throw fail("singular system");
  out.P_bar = sigma2 * lu.solve(sys.b);
  for (int j = 0; j < L; ++j)
    if (!std::isfinite(out.P_bar(j)) || out.P_bar(j) < 0.0 ||
        (sys.b(j) > 0.0 && !(out.P_bar(j) > 0.0)))
      throw fail("non-positive per-BS power");
  out.p_bar.resize(g.users());
  for (int u = 0; u < g.users(); ++u) {
    const int j = g.cell_of(u);
    const double interf = coeff.col(u).dot(out.P_bar);
    out.p_bar(u) = gamma(u) / own_quality(g, tau, u) * (interf + sigma2) / sys.diag(j, j);
  }
  out.total = out.P_bar.sum();
  return out;
}

CellPowers solve_powers_cobf(const CellPowerSystem& sys, const MatrixXd& beta,
                             const VectorXd& gamma, const LargeScaleGains& g,
                             const VectorXd& tau, double sigma2) {
  return solve_cell_powers(sys, beta, gamma, g, tau, sigma2);
}

VectorXd cell_sinr_bar(const VectorXd& p, const MatrixXd& coeff, const VectorXd& diag,
                       const LargeScaleGains& g, const VectorXd& tau, int N,
                       double sigma2) {
  VectorXd P = VectorXd::Zero(g.L());
  for (int u = 0; u < g.users(); ++u) P(g.cell_of(u)) += p(u) / N;
  VectorXd s(g.users());
  for (int u = 0; u < g.users(); ++u)
    s(u) = p(u) * own_quality(g, tau, u) * diag(g.cell_of(u)) / (coeff.col(u).dot(P) + sigma2);
  return s;
}

VectorXd sinr_bar_cobf(const VectorXd& p, const MatrixXd& beta, const VectorXd& Gamma_diag,
                       const LargeScaleGains& g, const VectorXd& tau, int N,
                       double sigma2) {
  return cell_sinr_bar(p, beta, Gamma_diag, g, tau, N, sigma2);
}

TauMax tau_max_cobf(const VectorXd& gamma, const LargeScaleGains& g, int N, double tol) {
  check_inputs(gamma, g, N);
  const VectorXd eta = solve_eta(gamma, g, N);
  const VectorXd Gd = gamma_diagonal(eta, gamma, g, N);
  const MatrixXd x = coupling_loads(eta, gamma, g);
  const int L = g.L();
  TauMax out{VectorXd::Zero(L), std::vector<bool>(static_cast<std::size_t>(L), false)};

  for (int j = 0; j < L; ++j) {
    // Row sum of the coupling matrix for a common tau in cell j.
    auto row_sum = [&](double t) {
      const double t2 = t * t;
      double s = 0.0;
      for (int k = 0; k < g.K(); ++k) {
        const int u = j * g.K() + k;
        for (int l = 0; l < L; ++l) {
          const double den = 1.0 + x(l, u);
          const double beta = g.comp(l, u) * ((1.0 - t2) / (den * den) + t2);
          s += gamma(u) * beta / (g.own(u) * (1.0 - t2));
        }
      }
      return s / N;
    };
    if (!(row_sum(0.0) < Gd(j))) {
      out.infeasible_at_zero[static_cast<std::size_t>(j)] = true;
      continue;
    }
    if (row_sum(0.0) == 0.0) {
      out.tau_max(j) = 1.0;
      continue;
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (row_sum(mid) < Gd(j) ? lo : hi) = mid;
    }
    out.tau_max(j) = 0.5 * (lo + hi);
  }
  return out;
}

CobfAsymptotic analyze_cobf(const VectorXd& gamma, const LargeScaleGains& g,
                            const VectorXd& tau, int N, double sigma2) {
  CobfAsymptotic a;
  a.eta = solve_eta(gamma, g, N);
  const VectorXd Gd = gamma_diagonal(a.eta, gamma, g, N);
  a.eta_prime = a.eta.array().square() / Gd.array();
  for (int j = 0; j < g.L(); ++j)
    if (!(Gd(j) > 0.0)) a.eta_prime(j) = kNaN;
  a.lambda_bar = lambda_bar_cobf(a.eta, gamma, g);
  a.beta = beta_coeffs(a.eta, gamma, g, tau);
  const CellPowerSystem sys = assemble_cell_system(Gd, a.beta, gamma, g, tau, N);
  a.Gamma = sys.diag;
  a.F = sys.coupling;
  a.b = sys.b;
  const Feasibility f = cell_feasibility(sys);
  a.spectral_radius = f.spectral_radius;
  a.row_sum_condition = f.row_sum_condition;
  try {
    const CellPowers pw = solve_cell_powers(sys, a.beta, gamma, g, tau, sigma2);
    a.P_bar = pw.P_bar;
    a.p_bar = pw.p_bar;
    a.total_power = pw.total;
    a.feasible = f.feasible;
  } catch (const InfeasibleError&) {
    a.feasible = false;
  }
  if (!a.feasible) {
    a.P_bar = VectorXd::Constant(g.L(), kNaN);
    a.p_bar = VectorXd::Constant(g.users(), kNaN);
    a.total_power = kNaN;
  }
  return a;
}

}  // namespace bscoop
