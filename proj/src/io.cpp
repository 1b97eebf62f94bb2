#include "bscoop/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bscoop {

using nlohmann::json;

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) bad_key(path + key, "missing");
  return *it;
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) bad_key(key, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad_key(key, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad_key(key, "expected a string");
  return v.get<std::string>();
}

/// A number broadcast to `n` entries, or a list of exactly `n` numbers.
std::vector<double> per_user(const json& v, int n, const std::string& key) {
  if (v.is_number()) return std::vector<double>(static_cast<std::size_t>(n), v.get<double>());
  if (!v.is_array()) bad_key(key, "expected a number or a list of numbers");
  if (static_cast<int>(v.size()) != n)
    bad_key(key, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_double(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) bad_key(path + k, "unknown key");
  }
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::isfinite(v[i]) ? fmt(v[i]) : "null";
  }
  return s + "]";
}

}  // namespace

NetworkConfig network_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("network config must be a JSON object");
  reject_unknown(j,
                 {"cells", "users_per_cell", "antennas", "region_side_m", "bs_positions_m",
                  "cell_side_m", "min_ue_distance_m", "path_loss_exponent",
                  "path_loss_cutoff_db", "cutoff_distance_m", "noise_power_dbm",
                  "noise_power_w", "rates_bps_hz", "tau2", "seed"},
                 "network.");
  NetworkConfig c;
  c.L = as_int(require(j, "cells", "network."), "network.cells");
  c.K = as_int(require(j, "users_per_cell", "network."), "network.users_per_cell");
  c.N = as_int(require(j, "antennas", "network."), "network.antennas");
  if (c.L < 1) bad_key("network.cells", "must be >= 1");
  if (c.K < 1) bad_key("network.users_per_cell", "must be >= 1");
  if (c.N < 1) bad_key("network.antennas", "must be >= 1");

  if (j.contains("region_side_m")) c.side_m = as_double(j["region_side_m"], "network.region_side_m");
  if (j.contains("bs_positions_m")) {
    const json& bs = j["bs_positions_m"];
    if (!bs.is_array()) bad_key("network.bs_positions_m", "expected a list of [x, y] pairs");
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const std::string key = "network.bs_positions_m[" + std::to_string(i) + "]";
      if (!bs[i].is_array() || bs[i].size() != 2) bad_key(key, "expected [x, y]");
      c.bs_positions_m.push_back({as_double(bs[i][0], key), as_double(bs[i][1], key)});
    }
  }
  if (j.contains("cell_side_m")) c.cell_side_m = as_double(j["cell_side_m"], "network.cell_side_m");
  if (j.contains("min_ue_distance_m"))
    c.min_ue_distance_m = as_double(j["min_ue_distance_m"], "network.min_ue_distance_m");
  if (j.contains("path_loss_exponent"))
    c.kappa = as_double(j["path_loss_exponent"], "network.path_loss_exponent");
  if (j.contains("path_loss_cutoff_db"))
    c.L_cutoff_db = as_double(j["path_loss_cutoff_db"], "network.path_loss_cutoff_db");
  if (j.contains("cutoff_distance_m"))
    c.x_cutoff_m = as_double(j["cutoff_distance_m"], "network.cutoff_distance_m");
  if (j.contains("noise_power_dbm") && j.contains("noise_power_w"))
    bad_key("network.noise_power_w", "give either noise_power_dbm or noise_power_w");
  if (j.contains("noise_power_dbm"))
    c.sigma2_w = dbm_to_watt(as_double(j["noise_power_dbm"], "network.noise_power_dbm"));
  if (j.contains("noise_power_w"))
    c.sigma2_w = as_double(j["noise_power_w"], "network.noise_power_w");
  if (j.contains("rates_bps_hz"))
    c.rates = per_user(j["rates_bps_hz"], c.users(), "network.rates_bps_hz");
  const std::vector<double> tau2 =
      j.contains("tau2") ? per_user(j["tau2"], c.users(), "network.tau2")
                         : std::vector<double>(static_cast<std::size_t>(c.users()), 0.0);
  for (std::size_t i = 0; i < tau2.size(); ++i) {
    if (!(tau2[i] >= 0.0 && tau2[i] <= 1.0))
      bad_key("network.tau2[" + std::to_string(i) + "]", "must lie in [0, 1]");
    c.tau.push_back(std::sqrt(tau2[i]));
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad_key("network.seed", "expected an unsigned integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  return c;
}

json network_to_json(const NetworkConfig& c) {
  json j;
  j["cells"] = c.L;
  j["users_per_cell"] = c.K;
  j["antennas"] = c.N;
  j["region_side_m"] = c.side_m;
  if (!c.bs_positions_m.empty()) {
    json bs = json::array();
    for (const Point& p : c.bs_positions_m) bs.push_back({p.x, p.y});
    j["bs_positions_m"] = bs;
    j["cell_side_m"] = c.cell_side_m;
  }
  j["min_ue_distance_m"] = c.min_ue_distance_m;
  j["path_loss_exponent"] = c.kappa;
  j["path_loss_cutoff_db"] = c.L_cutoff_db;
  j["cutoff_distance_m"] = c.x_cutoff_m;
  j["noise_power_w"] = c.sigma2_w;
  if (!c.rates.empty()) j["rates_bps_hz"] = c.rates;
  json tau2 = json::array();
  for (double t : c.tau) tau2.push_back(t * t);
  j["tau2"] = tau2;
  j["seed"] = c.seed;
  return j;
}

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment spec must be a JSON object");
  reject_unknown(j, {"network", "sweep", "schemes", "trials", "mode", "output", "threads"}, "");
  ExperimentSpec s;
  s.network = network_from_json(require(j, "network", ""));
  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    if (!sw.is_object()) bad_key("sweep", "expected an object");
    reject_unknown(sw, {"name", "values"}, "sweep.");
    try {
      s.sweep = parse_sweep(as_string(require(sw, "name", "sweep."), "sweep.name"));
    } catch (const ConfigError& e) {
      bad_key("sweep.name", e.what());
    }
    const json& vals = require(sw, "values", "sweep.");
    if (!vals.is_array()) bad_key("sweep.values", "expected a list of numbers");
    for (std::size_t i = 0; i < vals.size(); ++i)
      s.values.push_back(as_double(vals[i], "sweep.values[" + std::to_string(i) + "]"));
  }
  if (j.contains("schemes")) {
    const json& sc = j["schemes"];
    if (!sc.is_array()) bad_key("schemes", "expected a list of scheme names");
    s.schemes.clear();
    for (std::size_t i = 0; i < sc.size(); ++i) {
      const std::string key = "schemes[" + std::to_string(i) + "]";
      try {
        s.schemes.push_back(parse_scheme(as_string(sc[i], key)));
      } catch (const ConfigError& e) {
        bad_key(key, e.what());
      }
    }
  }
  if (j.contains("trials")) s.trials = as_int(j["trials"], "trials");
  if (j.contains("mode")) {
    try {
      s.mode = parse_mode(as_string(j["mode"], "mode"));
    } catch (const ConfigError& e) {
      bad_key("mode", e.what());
    }
  }
  if (j.contains("output")) s.output = as_string(j["output"], "output");
  if (j.contains("threads")) s.threads = as_int(j["threads"], "threads");
  s.validate();
  return s;
}

json spec_to_json(const ExperimentSpec& s) {
  json j;
  j["network"] = network_to_json(s.network);
  j["sweep"] = {{"name", std::string(to_string(s.sweep))}, {"values", s.values}};
  json sc = json::array();
  for (Scheme x : s.schemes) sc.push_back(std::string(to_string(x)));
  j["schemes"] = sc;
  j["trials"] = s.trials;
  j["mode"] = std::string(to_string(s.mode));
  j["output"] = s.output;
  j["threads"] = s.threads;
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ExperimentSpec read_spec(const std::string& path) { return spec_from_json(read_json_file(path)); }

void write_spec(const ExperimentSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << spec_to_json(spec).dump(2) << '\n';
}

std::string format_row(const ResultRow& r) {
  std::string s;
  s += to_string(r.scheme);
  s += ',';
  s += to_string(r.sweep);
  s += ',' + fmt(r.sweep_value);
  s += ',' + (r.trial ? std::to_string(*r.trial) : std::string("AGG"));
  s += ',' + fmt(r.total_power_w);
  s += ',' + fmt(r.asym_power_w);
  s += ',' + fmt(r.max_sinr_rel_dev);
  s += r.feasible ? ",1" : ",0";
  s += ",\"" + json_list(r.bs_powers) + '"';
  s += ',' + fmt(r.wall_ms);
  s += ',' + fmt(r.power_std_w);
  return s;
}

CsvWriter::CsvWriter(const std::string& path)
    : path_(path), out_(std::make_unique<std::ofstream>(path)) {
  if (!*out_) throw std::runtime_error("cannot write " + path);
  *out_ << kCsvHeader << '\n';
}

void CsvWriter::write(const ResultRow& row) {
  *out_ << format_row(row) << '\n';
  if (row.is_aggregate()) flush();
}

void CsvWriter::flush() {
  out_->flush();
  if (!*out_) throw std::runtime_error("write failed: " + path_);
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
  CsvWriter w(path);
  for (const ResultRow& r : rows) w.write(r);
  w.flush();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      cells.emplace_back();
    } else {
      cells.back() += ch;
    }
  }
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split_csv_line(line));
    if (t.rows.back().size() != t.header.size())
      throw ConfigError(path + ": row " + std::to_string(t.rows.size()) + " has " +
                        std::to_string(t.rows.back().size()) + " cells");
  }
  return t;
}

void write_meta(const ExperimentSpec& spec, const std::string& csv_path) {
  json m;
  m["spec"] = spec_to_json(spec);
  m["cutoff_distance_m"] = spec.network.x_cutoff_m;
  m["mode"] = std::string(to_string(spec.mode));
  m["csv_header"] = kCsvHeader;
  std::ofstream out(csv_path + ".meta.json");
  if (!out) throw std::runtime_error("cannot write " + csv_path + ".meta.json");
  out << m.dump(2) << '\n';
}

}  // namespace bscoop
