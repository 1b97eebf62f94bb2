#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bscoop/asym_cobf.hpp"
#include "bscoop/asym_comp.hpp"
#include "bscoop/asym_scbf.hpp"
#include "bscoop/checks.hpp"
#include "bscoop/closed_forms.hpp"
#include "bscoop/experiment.hpp"
#include "bscoop/io.hpp"

namespace {

using namespace bscoop;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumeric = 4;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string scheme = "all";
  std::optional<int> trials;
  std::optional<int> threads;
};

std::vector<Scheme> schemes_from_flag(const std::string& flag, std::vector<Scheme> dflt) {
  if (flag == "all") return dflt;
  return {parse_scheme(flag)};
}

/// A full experiment spec, or a bare network object wrapped in a one-point
/// spec at its own rates.
ExperimentSpec load_spec(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  const json j = read_json_file(c.config);
  ExperimentSpec spec;
  if (j.contains("network")) {
    spec = spec_from_json(j);
  } else {
    spec.network = network_from_json(j);
    spec.network.validate();
    spec.sweep = SweepVar::kN;
    spec.values = {static_cast<double>(spec.network.N)};
  }
  if (c.seed) spec.network.seed = *c.seed;
  if (c.trials) spec.trials = *c.trials;
  if (c.threads) spec.threads = *c.threads;
  if (!c.out.empty()) spec.output = c.out;
  spec.schemes = schemes_from_flag(c.scheme, spec.schemes);
  spec.validate();
  return spec;
}

std::vector<double> vec(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json nan_safe(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json nan_safe(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(nan_safe(v(i)));
  return a;
}

int cmd_run(const Common& c) {
  const ExperimentSpec spec = load_spec(c);
  if (spec.output.empty()) throw ConfigError("no output path: give --out or \"output\"");
  write_meta(spec, spec.output);
  CsvWriter writer(spec.output);
  bool any_feasible = false;
  run_experiment(spec, [&](const ResultRow& r) {
    writer.write(r);
    if (r.is_aggregate()) {
      any_feasible = any_feasible || r.feasible;
      std::cerr << to_string(r.scheme) << ' ' << to_string(r.sweep) << '=' << r.sweep_value
                << " mean " << r.total_power_w << " W, asym " << r.asym_power_w << " W\n";
    }
  });
  writer.flush();
  return any_feasible ? kExitOk : kExitInfeasible;
}

int cmd_asym(const Common& c, int trial) {
  const ExperimentSpec spec = load_spec(c);
  const NetworkConfig cfg = at_point(spec.network, spec.sweep, spec.values.front());
  const LargeScaleGains g =
      large_scale_gains(build_geometry(cfg, static_cast<std::uint64_t>(trial)), path_loss_params(cfg));
  const VectorXd gamma = rates_to_sinr_targets(cfg.rates);
  const VectorXd tau = tau_vector(cfg);
  json out;
  out["trial"] = trial;
  out["gamma"] = vec(gamma);
  bool any_feasible = false;
  for (Scheme s : spec.schemes) {
    json j;
    switch (s) {
      case Scheme::kScbf: {
        const ScbfAsymptotic a = analyze_scbf(gamma, g, tau, cfg.N, cfg.sigma2_w);
        j = {{"varsigma", nan_safe(a.varsigma)}, {"lambda_bar", nan_safe(a.lambda_bar)},
             {"P_bar", nan_safe(a.P_bar)},       {"p_bar", nan_safe(a.p_bar)},
             {"total_power_w", nan_safe(a.total_power)},
             {"spectral_radius", nan_safe(a.spectral_radius)},
             {"row_sum_condition", a.row_sum_condition},
             {"tau_max", nan_safe(a.tau_max)},  {"gamma_max", nan_safe(a.gamma_max)},
             {"feasible", a.feasible}};
        any_feasible = any_feasible || a.feasible;
        break;
      }
      case Scheme::kCobf: {
        const CobfAsymptotic a = analyze_cobf(gamma, g, tau, cfg.N, cfg.sigma2_w);
        j = {{"eta", nan_safe(a.eta)},          {"eta_prime", nan_safe(a.eta_prime)},
             {"lambda_bar", nan_safe(a.lambda_bar)}, {"P_bar", nan_safe(a.P_bar)},
             {"p_bar", nan_safe(a.p_bar)},      {"total_power_w", nan_safe(a.total_power)},
             {"spectral_radius", nan_safe(a.spectral_radius)},
             {"row_sum_condition", a.row_sum_condition},
             {"tau_max", nan_safe(tau_max_cobf(gamma, g, cfg.N).tau_max)},
             {"feasible", a.feasible}};
        any_feasible = any_feasible || a.feasible;
        break;
      }
      case Scheme::kComp: {
        const CompAsymptotic a = analyze_comp(gamma, g, tau, cfg.N, cfg.sigma2_w);
        j = {{"mu", nan_safe(a.mu)},            {"epsilon", nan_safe(a.epsilon)},
             {"lambda_bar", nan_safe(a.lambda_bar)}, {"Omega_bar", nan_safe(a.Omega_bar)},
             {"p_bar", nan_safe(a.p_bar)},      {"total_power_w", nan_safe(a.total_power)},
             {"spectral_radius", nan_safe(a.spectral_radius)},
             {"column_sum_condition", a.column_sum_condition},
             {"tau_max",
              nan_safe(tau_max_comp(a.epsilon, a.eps_prime, gamma, cfg.N, cfg.L).tau_max)},
             {"feasible", a.feasible}};
        any_feasible = any_feasible || a.feasible;
        break;
      }
    }
    j["mrt_limit_N_times_power_w"] = mrt_limit_powers(s, gamma, g, tau, cfg.sigma2_w);
    out[std::string(to_string(s))] = j;
  }
  std::cout << out.dump(2) << '\n';
  return any_feasible ? kExitOk : kExitInfeasible;
}

int cmd_check(const Common& c) {
  const std::vector<CheckResult> results = run_invariant_checks(c.seed.value_or(1));
  bool ok = true;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
    std::cout << '\n';
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitNumeric;
}

int cmd_casestudy(double alpha, double gamma, int N, double d) {
  const CaseStudyResult r = two_cell_case_study(alpha, gamma, N, d);
  const json out = {
      {"alpha", r.alpha},
      {"eta", {r.eta1, r.eta2}},
      {"varsigma", r.varsigma},
      {"lambda_scbf", {r.lambda_scbf1, r.lambda_scbf2}},
      {"lambda_cobf", {r.lambda_cobf11, r.lambda_cobf21}},
      {"mu", {r.mu1, r.mu2}},
      {"lambda_comp", {r.lambda_comp1, r.lambda_comp2}},
      {"tau_max_scbf", {r.tau_max_scbf1, r.tau_max_scbf2}},
      {"tau_max_cobf", {r.tau_max_cobf1, r.tau_max_cobf2}},
      {"tau_max_comp", {r.tau_max_comp1, r.tau_max_comp2}},
      {"orderings",
       {{"cobf_lambda", r.cobf_lambda_ordered},
        {"comp_lambda", r.comp_lambda_ordered},
        {"scbf_tau", r.scbf_tau_ordered},
        {"cobf_tau", r.cobf_tau_ordered},
        {"comp_tau", r.comp_tau_ordered}}}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool with_run_flags) {
  sub->add_option("--config", c.config, "experiment spec or network JSON");
  sub->add_option("--seed", c.seed, "base seed (overrides network.seed)");
  sub->add_option("--scheme", c.scheme, "scbf, cobf, comp or all")
      ->check(CLI::IsMember({"scbf", "cobf", "comp", "all"}));
  if (with_run_flags) {
    sub->add_option("--out", c.out, "CSV output path");
    sub->add_option("--trials", c.trials, "trials per sweep point")->check(CLI::PositiveNumber);
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cell downlink power minimization: finite solver and large-system analysis"};
  app.require_subcommand(1);

  Common run_opts, asym_opts, check_opts;
  int asym_trial = 0;
  double alpha = 0.5, gamma = 1.0, d = 1.0;
  int N = 4;

  CLI::App* run = app.add_subcommand("run", "run an experiment spec and write CSV");
  add_common(run, run_opts, true);
  CLI::App* asym = app.add_subcommand("asym", "print deterministic quantities for one drop");
  add_common(asym, asym_opts, false);
  asym->add_option("--trial", asym_trial, "drop index")->check(CLI::NonNegativeNumber);
  CLI::App* check = app.add_subcommand("check", "run the invariant suite");
  check->add_option("--seed", check_opts.seed, "seed for random instances");
  CLI::App* cs = app.add_subcommand("casestudy", "two-cell, one-user-per-cell report");
  cs->add_option("--alpha", alpha, "relative strength in (0, 1]");
  cs->add_option("--gamma", gamma, "common SINR target");
  cs->add_option("--N", N, "antennas per BS");
  cs->add_option("--d", d, "reference gain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*asym) return cmd_asym(asym_opts, asym_trial);
    if (*check) return cmd_check(check_opts);
    if (*cs) return cmd_casestudy(alpha, gamma, N, d);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConvergenceError& e) {
    std::cerr << "numeric failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumeric;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}
