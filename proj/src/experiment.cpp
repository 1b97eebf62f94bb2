#include "bscoop/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "bscoop/asym_cobf.hpp"
#include "bscoop/asym_comp.hpp"
#include "bscoop/asym_scbf.hpp"
#include "bscoop/finite.hpp"

namespace bscoop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Prediction {
  bool feasible = false;
  double total = kNaN;
  VectorXd lambda_bar;
  VectorXd p_bar;
};

Prediction predict(Scheme s, const VectorXd& gamma, const LargeScaleGains& g,
                   const VectorXd& tau, int N, double sigma2) {
  Prediction p;
  try {
    switch (s) {
      case Scheme::kScbf: {
        const ScbfAsymptotic a = analyze_scbf(gamma, g, tau, N, sigma2);
        p = {a.feasible, a.total_power, a.lambda_bar, a.p_bar};
        break;
      }
      case Scheme::kCobf: {
        const CobfAsymptotic a = analyze_cobf(gamma, g, tau, N, sigma2);
        p = {a.feasible, a.total_power, a.lambda_bar, a.p_bar};
        break;
      }
      case Scheme::kComp: {
        const CompAsymptotic a = analyze_comp(gamma, g, tau, N, sigma2);
        p = {a.feasible, a.total_power, a.lambda_bar, a.p_bar};
        break;
      }
    }
  } catch (const InfeasibleError&) {
    p = {};
  } catch (const ConvergenceError&) {
    p = {};
  } catch (const NumericError&) {
    p = {};
  }
  if (!p.feasible) p.total = kNaN;
  return p;
}

double worst_relative_deviation(const VectorXd& sinr, const VectorXd& gamma) {
  double dev = 0.0;
  for (Eigen::Index u = 0; u < gamma.size(); ++u)
    if (gamma(u) > 0.0) dev = std::max(dev, std::abs(sinr(u) - gamma(u)) / gamma(u));
  return dev;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void mark_infeasible(ResultRow& r) {
  r.feasible = false;
  r.total_power_w = kNaN;
  r.max_sinr_rel_dev = kNaN;
  r.bs_powers.clear();
}

ResultRow finite_row(Scheme s, const ChannelSet& ch, const VectorXd& gamma, double sigma2) {
  ResultRow r;
  try {
    const FiniteSolution sol = solve_finite(s, ch, gamma, sigma2);
    r.feasible = true;
    r.total_power_w = sol.total_power;
    r.max_sinr_rel_dev = worst_relative_deviation(sol.realized_sinr, gamma);
    r.bs_powers = to_std(sol.bs_power);
  } catch (const InfeasibleError&) {
    mark_infeasible(r);
  } catch (const ConvergenceError&) {
    mark_infeasible(r);
  } catch (const NumericError&) {
    mark_infeasible(r);
  }
  return r;
}

ResultRow applied_row(Scheme s, const ChannelSet& ch, const VectorXd& gamma, double sigma2,
                      const Prediction& pred) {
  ResultRow r;
  if (!pred.feasible) {
    mark_infeasible(r);
    return r;
  }
  try {
    const MatrixXcd dirs = beamform_directions(s, ch, pred.lambda_bar);
    const CrossGainMatrix G = realized_gain_matrix(s, ch, dirs);
    const VectorXd sinr = realized_sinr(G, pred.p_bar, sigma2);
    r.feasible = true;
    r.total_power_w = total_power(pred.p_bar, scheme_scale(s, ch.N, ch.L()));
    r.max_sinr_rel_dev = worst_relative_deviation(sinr, gamma);
    r.bs_powers = to_std(bs_powers(s, pred.p_bar, dirs, ch.N, ch.L(), ch.K));
  } catch (const NumericError&) {
    mark_infeasible(r);
  }
  return r;
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string_view to_string(SweepVar v) {
  switch (v) {
    case SweepVar::kRate: return "rate";
    case SweepVar::kTau2: return "tau2";
    case SweepVar::kN: return "N";
  }
  return "?";
}

SweepVar parse_sweep(std::string_view name) {
  if (name == "rate") return SweepVar::kRate;
  if (name == "tau2") return SweepVar::kTau2;
  if (name == "N") return SweepVar::kN;
  throw ConfigError("unknown sweep variable '" + std::string(name) + "' (rate, tau2, N)");
}

std::string_view to_string(RunMode m) {
  return m == RunMode::kFinite ? "finite" : "asymptotic";
}

RunMode parse_mode(std::string_view name) {
  if (name == "finite") return RunMode::kFinite;
  if (name == "asymptotic") return RunMode::kAsymptotic;
  throw ConfigError("unknown mode '" + std::string(name) + "' (finite, asymptotic)");
}

NetworkConfig at_point(const NetworkConfig& base, SweepVar v, double value) {
  NetworkConfig c = base;
  switch (v) {
    case SweepVar::kRate:
      if (!(value >= 0.0) || !std::isfinite(value)) throw ConfigError("rate must be >= 0");
      c.set_uniform_rate(value);
      break;
    case SweepVar::kTau2:
      c.set_uniform_tau2(value);
      break;
    case SweepVar::kN:
      if (!(value >= 1.0) || value != std::floor(value) || value > 1e6)
        throw ConfigError("N sweep values must be positive integers");
      c.N = static_cast<int>(value);
      break;
  }
  return c;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (values.empty()) throw ConfigError("sweep.values must not be empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i - 1] < values[i])) throw ConfigError("sweep.values must be strictly ascending");
  if (schemes.empty()) throw ConfigError("schemes must not be empty");
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t k = i + 1; k < schemes.size(); ++k)
      if (schemes[i] == schemes[k]) throw ConfigError("schemes must not repeat");
  for (double v : values) at_point(network, sweep, v).validate();
}

std::vector<ResultRow> run_trial(const ExperimentSpec& spec, double value, int trial) {
  const auto t_setup = Clock::now();
  const NetworkConfig cfg = at_point(spec.network, spec.sweep, value);
  cfg.validate();
  const auto t = static_cast<std::uint64_t>(trial);
  const Geometry geo = build_geometry(cfg, t);
  const LargeScaleGains gains = large_scale_gains(geo, path_loss_params(cfg));
  const VectorXd gamma = rates_to_sinr_targets(cfg.rates);
  const VectorXd tau = tau_vector(cfg);
  const ChannelSet ch = draw_channels(gains, tau, cfg.N, cfg.seed, t);
  const double setup_ms = ms_since(t_setup);

  std::vector<ResultRow> rows;
  for (Scheme s : spec.schemes) {
    const auto t0 = Clock::now();
    const Prediction pred = predict(s, gamma, gains, tau, cfg.N, cfg.sigma2_w);
    ResultRow r = spec.mode == RunMode::kFinite ? finite_row(s, ch, gamma, cfg.sigma2_w)
                                                : applied_row(s, ch, gamma, cfg.sigma2_w, pred);
    r.scheme = s;
    r.sweep = spec.sweep;
    r.sweep_value = value;
    r.trial = trial;
    r.asym_power_w = pred.total;
    r.power_std_w = kNaN;
    r.wall_ms = setup_ms + ms_since(t0);
    rows.push_back(std::move(r));
  }
  return rows;
}

ResultRow run_trial(const ExperimentSpec& spec, Scheme s, double value, int trial) {
  ExperimentSpec one = spec;
  one.schemes = {s};
  return run_trial(one, value, trial).front();
}

ResultRow aggregate(const std::vector<ResultRow>& trials) {
  if (trials.empty()) throw ConfigError("cannot aggregate zero trials");
  ResultRow a;
  a.scheme = trials.front().scheme;
  a.sweep = trials.front().sweep;
  a.sweep_value = trials.front().sweep_value;
  a.trial.reset();

  double sum = 0.0, asym_sum = 0.0, wall = 0.0;
  int n = 0, n_asym = 0;
  std::vector<double> devs;
  std::vector<double> bs;
  for (const ResultRow& r : trials) {
    wall += r.wall_ms;
    if (!r.feasible) continue;
    ++n;
    sum += r.total_power_w;
    devs.push_back(r.max_sinr_rel_dev);
    if (std::isfinite(r.asym_power_w)) {
      asym_sum += r.asym_power_w;
      ++n_asym;
    }
    if (bs.empty()) bs.assign(r.bs_powers.size(), 0.0);
    for (std::size_t i = 0; i < bs.size() && i < r.bs_powers.size(); ++i) bs[i] += r.bs_powers[i];
  }
  a.wall_ms = wall;
  a.feasible = n > 0;
  if (n == 0) {
    a.total_power_w = a.asym_power_w = a.max_sinr_rel_dev = a.power_std_w = kNaN;
    return a;
  }
  a.total_power_w = sum / n;
  a.asym_power_w = n_asym > 0 ? asym_sum / n_asym : kNaN;
  a.max_sinr_rel_dev = median(devs);
  for (double& x : bs) x /= n;
  a.bs_powers = bs;
  if (n < 2) {
    a.power_std_w = kNaN;
  } else {
    double ss = 0.0;
    for (const ResultRow& r : trials)
      if (r.feasible) ss += (r.total_power_w - a.total_power_w) * (r.total_power_w - a.total_power_w);
    a.power_std_w = std::sqrt(ss / (n - 1));
  }
  return a;
}

void run_experiment(const ExperimentSpec& spec, const RowSink& sink) {
  spec.validate();
  const int n_schemes = static_cast<int>(spec.schemes.size());
  for (double value : spec.values) {
    std::vector<std::vector<ResultRow>> per_trial(static_cast<std::size_t>(spec.trials));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
      for (int t = next++; t < spec.trials; t = next++) {
        try {
          per_trial[static_cast<std::size_t>(t)] = run_trial(spec, value, t);
        } catch (...) {
          const std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = spec.trials;
        }
      }
    };
    const int n_threads = std::min(spec.threads, spec.trials);
    if (n_threads <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    for (int k = 0; k < n_schemes; ++k) {
      std::vector<ResultRow> rows;
      for (auto& tr : per_trial) rows.push_back(tr[static_cast<std::size_t>(k)]);
      for (const ResultRow& r : rows) sink(r);
      sink(aggregate(rows));
    }
  }
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  std::vector<ResultRow> out;
  run_experiment(spec, [&](const ResultRow& r) { out.push_back(r); });
  return out;
}

}  // namespace bscoop
