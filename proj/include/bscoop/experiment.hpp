#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bscoop/common.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

enum class SweepVar { kRate, kTau2, kN };

std::string_view to_string(SweepVar v);
/// Accepts "rate", "tau2", "N".
SweepVar parse_sweep(std::string_view name);

/// kFinite: full fixed-point solve per trial, asymptotic prediction alongside.
/// kAsymptotic: deterministic multipliers and powers applied to the trial's
/// channels; the row records the realized SINR deviation.
enum class RunMode { kFinite, kAsymptotic };

std::string_view to_string(RunMode m);
RunMode parse_mode(std::string_view name);

struct ExperimentSpec {
  NetworkConfig network;
  SweepVar sweep = SweepVar::kRate;
  std::vector<double> values;
  std::vector<Scheme> schemes{Scheme::kScbf, Scheme::kCobf, Scheme::kComp};
  int trials = 1;
  RunMode mode = RunMode::kFinite;
  std::string output;
  int threads = 1;

  /// Throws ConfigError. The network is validated at every sweep point.
  void validate() const;
};

/// Network configuration at one sweep point.
NetworkConfig at_point(const NetworkConfig& base, SweepVar v, double value);

struct ResultRow {
  Scheme scheme = Scheme::kCobf;
  SweepVar sweep = SweepVar::kRate;
  double sweep_value = 0.0;
  std::optional<int> trial;  // empty for the aggregate row
  double total_power_w = 0.0;
  double asym_power_w = 0.0;
  double max_sinr_rel_dev = 0.0;
  bool feasible = false;
  std::vector<double> bs_powers;
  double wall_ms = 0.0;
  double power_std_w = 0.0;  // NaN on trial rows

  bool is_aggregate() const { return !trial.has_value(); }
};

/// One trial of every requested scheme on a shared drop and channel draw.
/// Solver failures come back as rows with feasible == false.
std::vector<ResultRow> run_trial(const ExperimentSpec& spec, double value, int trial);

/// Single-scheme convenience wrapper.
ResultRow run_trial(const ExperimentSpec& spec, Scheme s, double value, int trial);

/// Mean and sample standard deviation of total power over feasible trials,
/// mean asymptotic prediction over the same trials, median deviation, mean
/// per-BS powers. Feasible if any trial is.
ResultRow aggregate(const std::vector<ResultRow>& trials);

using RowSink = std::function<void(const ResultRow&)>;

/// Runs every point and scheme. For each point the trial rows (in trial
/// order) followed by one aggregate row per scheme are passed to `sink`
/// before the next point starts.
void run_experiment(const ExperimentSpec& spec, const RowSink& sink);

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

}  // namespace bscoop
