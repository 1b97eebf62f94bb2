#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "bscoop/experiment.hpp"
#include "bscoop/model.hpp"

namespace bscoop {

/// Network keys: cells, users_per_cell, antennas, region_side_m,
/// bs_positions_m, cell_side_m, min_ue_distance_m, path_loss_exponent,
/// path_loss_cutoff_db, cutoff_distance_m, noise_power_dbm | noise_power_w,
/// rates_bps_hz (number or list), tau2 (number or list), seed.
/// Malformed input raises ConfigError naming the key.
NetworkConfig network_from_json(const nlohmann::json& j);
nlohmann::json network_to_json(const NetworkConfig& cfg);

/// Spec keys: network, sweep {name, values}, schemes, trials, mode
/// ("finite" | "asymptotic"), output, threads.
ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ExperimentSpec& spec);

/// Parses a file as JSON. Throws ConfigError on I/O or syntax errors.
nlohmann::json read_json_file(const std::string& path);

ExperimentSpec read_spec(const std::string& path);
void write_spec(const ExperimentSpec& spec, const std::string& path);

inline constexpr const char* kCsvHeader =
    "scheme,sweep_name,sweep_value,trial,total_power_w,asym_power_w,max_sinr_rel_dev,"
    "feasible,bs_powers_json,wall_ms,power_std_w";

/// One CSV line without the trailing newline. Doubles use %.17g, NaN is "nan".
std::string format_row(const ResultRow& row);

/// Streams rows to a CSV file, flushing after every point.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write(const ResultRow& row);
  void flush();

 private:
  std::string path_;
  std::unique_ptr<std::ostream> out_;
};

void write_results(const std::vector<ResultRow>& rows, const std::string& path);

/// Parsed CSV: header followed by rows of raw cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

/// `<out>.meta.json`: the resolved experiment, the cut-off distance and the run mode.
void write_meta(const ExperimentSpec& spec, const std::string& csv_path);

}  // namespace bscoop
