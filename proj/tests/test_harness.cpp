#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#include "bscoop/experiment.hpp"
#include "bscoop/io.hpp"
#include "helpers.hpp"

using namespace bscoop;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.network = test::two_cell_network(2, 8, 1.0, 0.1, 77);
  s.sweep = SweepVar::kRate;
  s.values = {0.5, 1.0};
  s.trials = 4;
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "bscoop_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string config_error(const json& j) {
  try {
    spec_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool same_numbers(const ResultRow& a, const ResultRow& b) {
  auto eq = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.scheme == b.scheme && a.trial == b.trial && a.feasible == b.feasible &&
         eq(a.total_power_w, b.total_power_w) && eq(a.asym_power_w, b.asym_power_w) &&
         eq(a.max_sinr_rel_dev, b.max_sinr_rel_dev) && eq(a.power_std_w, b.power_std_w) &&
         a.bs_powers == b.bs_powers;
}

}  // namespace

TEST_CASE("spec JSON round trip") {
  ExperimentSpec s = small_spec();
  s.network.tau[1] = std::sqrt(0.3);
  s.network.min_ue_distance_m = 10.0;
  s.mode = RunMode::kAsymptotic;
  s.schemes = {Scheme::kComp, Scheme::kScbf};
  s.output = "out.csv";
  const fs::path p = scratch("spec.json");
  write_spec(s, p.string());
  const ExperimentSpec back = read_spec(p.string());
  CHECK(spec_to_json(back) == spec_to_json(s));
  CHECK(back.network.tau == s.network.tau);
  CHECK(back.network.rates == s.network.rates);
  CHECK(back.network.sigma2_w == s.network.sigma2_w);
  CHECK(back.schemes == s.schemes);
  CHECK(back.mode == RunMode::kAsymptotic);
}

TEST_CASE("malformed specs name the offending key") {
  const json good = spec_to_json(small_spec());
  CHECK_NOTHROW(spec_from_json(good));

  json j = good;
  j["network"]["antennas"] = "many";
  CHECK(config_error(j).find("network.antennas") != std::string::npos);
  j = good;
  j["network"].erase("cells");
  CHECK(config_error(j).find("network.cells") != std::string::npos);
  j = good;
  j["schemes"] = {"cobf", "mimo"};
  CHECK(config_error(j).find("schemes[1]") != std::string::npos);
  j = good;
  j["sweep"]["name"] = "power";
  CHECK(config_error(j).find("sweep.name") != std::string::npos);
  j = good;
  j["network"]["tau2"] = {0.1, 0.2, 0.3};
  CHECK(config_error(j).find("network.tau2") != std::string::npos);
  j = good;
  j["colour"] = 1;
  CHECK(config_error(j).find("colour") != std::string::npos);
  j = good;
  j["sweep"]["values"] = {2.0, 1.0};
  CHECK_FALSE(config_error(j).empty());
  j = good;
  j["trials"] = 0;
  CHECK_FALSE(config_error(j).empty());
}

TEST_CASE("CSV layout") {
  const fs::path p = scratch("empty.csv");
  write_results({}, p.string());
  std::ifstream in(p);
  std::string header, extra;
  std::getline(in, header);
  CHECK(header ==
        "scheme,sweep_name,sweep_value,trial,total_power_w,asym_power_w,max_sinr_rel_dev,"
        "feasible,bs_powers_json,wall_ms,power_std_w");
  CHECK_FALSE(std::getline(in, extra));
  CHECK(read_csv(p.string()).rows.empty());

  ResultRow r;
  r.scheme = Scheme::kComp;
  r.sweep = SweepVar::kTau2;
  r.sweep_value = 0.1;
  r.trial = 3;
  r.total_power_w = 1.5e-3;
  r.asym_power_w = std::nan("");
  r.max_sinr_rel_dev = 0.0;
  r.feasible = true;
  r.bs_powers = {1e-3, 5e-4};
  r.wall_ms = 2.0;
  r.power_std_w = std::nan("");
  CHECK(format_row(r) ==
        "comp,tau2,0.10000000000000001,3,0.0015,nan,0,1,\"[0.001,0.00050000000000000001]\",2,nan");
}

TEST_CASE("one point and one trial give a trial row and an aggregate row") {
  ExperimentSpec s = small_spec();
  s.values = {1.0};
  s.trials = 1;
  s.schemes = {Scheme::kCobf};
  const auto rows = run_experiment(s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].trial == 0);
  CHECK(rows[1].is_aggregate());
  CHECK(rows[1].total_power_w == rows[0].total_power_w);
  CHECK(std::isnan(rows[0].power_std_w));
}

TEST_CASE("trials are deterministic and thread count does not matter") {
  const ExperimentSpec s = small_spec();
  const auto a = run_trial(s, 1.0, 2);
  const auto b = run_trial(s, 1.0, 2);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_numbers(a[i], b[i]));
  CHECK(same_numbers(run_trial(s, Scheme::kComp, 1.0, 2), a[2]));

  ExperimentSpec par = s;
  par.threads = 3;
  const auto serial_rows = run_experiment(s);
  const auto parallel_rows = run_experiment(par);
  REQUIRE(serial_rows.size() == parallel_rows.size());
  CHECK(serial_rows.size() == 2 * 3 * (4 + 1));
  for (std::size_t i = 0; i < serial_rows.size(); ++i)
    CHECK(same_numbers(serial_rows[i], parallel_rows[i]));
}

TEST_CASE("finite mode meets targets, asymptotic mode records deviation") {
  ExperimentSpec s = small_spec();
  s.values = {1.0};
  for (const ResultRow& r : run_experiment(s)) {
    REQUIRE(r.feasible);
    CHECK(r.max_sinr_rel_dev <= 1e-8);
    CHECK(r.total_power_w > 0.0);
    CHECK(r.asym_power_w > 0.0);
  }
  s.mode = RunMode::kAsymptotic;
  for (const ResultRow& r : run_experiment(s)) {
    REQUIRE(r.feasible);
    CHECK(r.max_sinr_rel_dev > 1e-6);
    if (!r.is_aggregate()) CHECK(r.total_power_w == doctest::Approx(r.asym_power_w).epsilon(1e-12));
  }
}

TEST_CASE("zero rate gives a zero-power row") {
  ExperimentSpec s = small_spec();
  s.values = {0.0};
  s.trials = 1;
  for (const ResultRow& r : run_experiment(s)) {
    CHECK(r.feasible);
    CHECK(r.total_power_w == 0.0);
    CHECK(r.max_sinr_rel_dev == 0.0);
  }
}

TEST_CASE("infeasible points are flagged, not dropped") {
  ExperimentSpec s = small_spec();
  s.network = test::two_cell_network(4, 4, 1.0, 0.5, 5);
  s.values = {1.0, 6.0};
  s.trials = 3;
  s.schemes = {Scheme::kScbf};
  const auto rows = run_experiment(s);
  REQUIRE(rows.size() == 8);
  int flagged = 0, valued = 0;
  for (int i = 4; i < 7; ++i) (rows[i].feasible ? valued : flagged)++;
  CHECK(flagged + valued == 3);
  CHECK(flagged == 3);
  CHECK_FALSE(rows[7].feasible);
  CHECK(std::isnan(rows[7].total_power_w));
}

TEST_CASE("CSV written by the writer parses back with the same row count") {
  const ExperimentSpec s = small_spec();
  const auto rows = run_experiment(s);
  const fs::path p = scratch("rows.csv");
  write_results(rows, p.string());
  const CsvTable t = read_csv(p.string());
  CHECK(t.rows.size() == rows.size());
  CHECK(t.header.size() == 11);
  write_meta(s, p.string());
  const json meta = read_json_file(p.string() + ".meta.json");
  CHECK(meta["cutoff_distance_m"] == 25.0);
  CHECK(meta["mode"] == "finite");
}

TEST_CASE("sweep points") {
  const NetworkConfig base = test::two_cell_network(2, 8, 1.0, 0.0);
  CHECK(at_point(base, SweepVar::kN, 32).N == 32);
  CHECK(at_point(base, SweepVar::kTau2, 0.25).tau[0] == 0.5);
  CHECK(at_point(base, SweepVar::kRate, 2.0).rates[3] == 2.0);
  CHECK_THROWS_AS(at_point(base, SweepVar::kN, 3.5), ConfigError);
  CHECK_THROWS_AS(parse_sweep("power"), ConfigError);
}
