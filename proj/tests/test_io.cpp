#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "riskbound/io.hpp"
#include "riskbound/rng.hpp"

using namespace riskbound;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("riskbound_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("double formatting round-trips exactly") {
  auto rng = make_rng(3);
  for (int k = 0; k < 2000; ++k) {
    const double v = uniform_real(rng, -1.0, 1.0) *
                     std::exp(uniform_real(rng, -300.0, 300.0) * 0.1);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(parse_double(format_double(0.1)) == 0.1);
  CHECK(format_double(0.5) == "0.5");
  CHECK(parse_double("1e3") == 1000.0);
  CHECK_THROWS_AS(parse_double("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("1e9999"), std::invalid_argument);
}

TEST_CASE("sample files in all accepted shapes") {
  TempDir dir;

  const auto json_array = dir.file("a.json");
  write_lines(json_array, {"[1.5, -2.25, 3]"});
  CHECK(read_samples(json_array) == std::vector<double>{1.5, -2.25, 3.0});

  const auto json_object = dir.file("b.json");
  write_lines(json_object, {"{\"samples\": [0.125, 4]}"});
  CHECK(read_samples(json_object) == std::vector<double>{0.125, 4.0});

  const auto csv = dir.file("c.csv");
  write_lines(csv, {"value", "1.5", "-2.25", "3"});
  CHECK(read_samples(csv) == std::vector<double>{1.5, -2.25, 3.0});

  const auto plain = dir.file("d.txt");
  write_lines(plain, {"1.5", "-2.25"});
  CHECK(read_samples(plain) == std::vector<double>{1.5, -2.25});

  const auto bad = dir.file("e.json");
  write_lines(bad, {"{\"noise\": 1}"});
  CHECK_THROWS_AS(read_samples(bad), std::invalid_argument);
  CHECK_THROWS(read_samples(dir.file("missing.csv")));

  // A stray word after the header is an error, not a second header.
  const auto two_headers = dir.file("f.csv");
  write_lines(two_headers, {"value", "oops", "1.0"});
  CHECK_THROWS_AS(read_samples(two_headers), std::invalid_argument);
}

TEST_CASE("histogram bins cover the range") {
  const std::vector<double> values = {0.0, 0.1, 0.2, 0.35, 0.5, 1.0};
  const auto bins = histogram(values, 4);
  REQUIRE(bins.size() == 4);
  std::uint64_t total = 0;
  for (const auto& b : bins) total += b.count;
  CHECK(total == values.size());
  CHECK(bins[0].count == 3);  // 0.0, 0.1, 0.2
  CHECK(bins[1].count == 1);
  CHECK(bins[2].count == 1);
  CHECK(bins[3].count == 1);  // the max value folds into the last bin
  CHECK(bins.front().center == doctest::Approx(0.125));
  CHECK(bins.back().center == doctest::Approx(0.875));

  // Degenerate range still produces a full count.
  const auto flat = histogram({2.0, 2.0, 2.0}, 3);
  std::uint64_t flat_total = 0;
  for (const auto& b : flat) flat_total += b.count;
  CHECK(flat_total == 3);
  CHECK_THROWS_AS(histogram({}, 4), std::invalid_argument);
  CHECK_THROWS_AS(histogram({1.0}, 0), std::invalid_argument);

  TempDir dir;
  const auto path = dir.file("h.csv");
  write_histogram_csv(path, bins);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "value,count");
  CHECK(lines[1] == format_double(bins[0].center) + ",3");
}

TEST_CASE("values csv uses exact formatting") {
  TempDir dir;
  const auto path = dir.file("v.csv");
  const std::vector<double> values = {0.1, -2.5e-17, 3.0};
  write_values_csv(path, "robustness", values);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "robustness");
  for (int i = 0; i < 3; ++i)
    CHECK(parse_double(lines[i + 1]) == values[i]);
}

TEST_CASE("trajectory csv layout") {
  sim::Trajectory traj;
  traj.timestep = 0.5;
  sim::WorldState w;
  for (int i = 0; i < sim::kAgentCount; ++i) {
    w.agents[i].x = 0.1 * i;
    w.agents[i].y = -0.2 * i;
    w.agents[i].theta = 0.3 * i;
  }
  traj.states.push_back(w);
  w.time = 0.5;
  w.agents[0].x = 0.7071067811865476;
  traj.states.push_back(w);

  TempDir dir;
  const auto path = dir.file("t.csv");
  write_trajectory_csv(path, traj);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "t,x1,y1,theta1,x2,y2,theta2,x3,y3,theta3");
  // Second state: time then agent 0 x round-trips bitwise.
  const auto row = lines[2];
  const auto comma = row.find(',');
  CHECK(parse_double(row.substr(0, comma)) == 0.5);
  const auto second = row.find(',', comma + 1);
  CHECK(parse_double(row.substr(comma + 1, second - comma - 1)) ==
        0.7071067811865476);
}

TEST_CASE("config json round-trips") {
  SearchConfig sc;
  sc.t_min = 0.5;
  sc.t_points = 11;
  sc.mu_min = -2.5;
  const SearchConfig sc2 = search_config_from_json(to_json(sc));
  CHECK(sc2.t_min == sc.t_min);
  CHECK(sc2.t_max == sc.t_max);
  CHECK(sc2.t_points == sc.t_points);
  CHECK(sc2.mu_points == sc.mu_points);
  CHECK(sc2.refine_tol == sc.refine_tol);
  CHECK(sc2.max_evaluations == sc.max_evaluations);
  REQUIRE(sc2.mu_min.has_value());
  CHECK(*sc2.mu_min == -2.5);
  CHECK_FALSE(sc2.mu_max.has_value());

  sim::SimConfig sim_cfg;
  sim_cfg.dt = 0.02;
  sim_cfg.noise = sim::NoiseModel::uniform;
  const auto sim2 = sim_config_from_json(to_json(sim_cfg));
  CHECK(sim2.dt == 0.02);
  CHECK(sim2.horizon == sim_cfg.horizon);
  CHECK(sim2.noise == sim::NoiseModel::uniform);

  sim::ControllerParams p;
  p.p1 = 0.7;
  p.p4 = 42.0;
  const auto p2 = params_from_json(to_json(p));
  CHECK(p2.p1 == 0.7);
  CHECK(p2.p2 == p.p2);
  CHECK(p2.p3 == p.p3);
  CHECK(p2.p4 == 42.0);

  CHECK(noise_model_from_name("none") == sim::NoiseModel::none);
  CHECK(noise_model_from_name("gaussian") == sim::NoiseModel::gaussian);
  CHECK(noise_model_name(sim::NoiseModel::uniform) == "uniform");
  CHECK_THROWS_AS(noise_model_from_name("pink"), std::invalid_argument);
}

TEST_CASE("unknown keys are rejected") {
  const json obj = {{"alpha", 0.1}, {"epsilom", 0.02}};
  CHECK_THROWS_AS(check_keys(obj, {"alpha", "epsilon"}, "verify config"),
                  std::invalid_argument);
  try {
    check_keys(obj, {"alpha", "epsilon"}, "verify config");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("epsilom") != std::string::npos);
    CHECK(msg.find("verify config") != std::string::npos);
  }
  CHECK_NOTHROW(check_keys(json{{"alpha", 0.1}}, {"alpha", "epsilon"}, "x"));

  // Partial configs are fine; json parse of a config with a typo inside
  // a nested block is the caller's job, nested keys are not checked here.
  const json sim_extra = {{"dt", 0.02}, {"dtt", 1.0}};
  CHECK_THROWS_AS(sim_config_from_json(sim_extra), std::invalid_argument);
  const json search_extra = {{"t_min", 0.1}, {"t_mni", 1.0}};
  CHECK_THROWS_AS(search_config_from_json(search_extra),
                  std::invalid_argument);
  const json params_extra = {{"p1", 1.0}, {"p5", 1.0}};
  CHECK_THROWS_AS(params_from_json(params_extra), std::invalid_argument);
}

TEST_CASE("report serialization carries the campaign fields") {
  VerificationReport rep;
  rep.bound_cvar = -0.14;
  rep.bound_evar = -0.12;
  rep.n_used = 149;
  rep.alpha = 0.1;
  rep.epsilon = 0.02;
  rep.gamma = 0.95;
  rep.master_seed = 7;
  rep.robustness = {0.2, 0.21};
  const json j = to_json(rep);
  CHECK(j["bound_cvar"].get<double>() == -0.14);
  CHECK(j["n_used"].get<std::uint64_t>() == 149);
  CHECK(j["expected_shortfall_floor"].get<double>() == 0.14);
  // Raw campaign samples go to CSV sidecars, not into the report body.
  CHECK_FALSE(j.contains("robustness"));

  SynthesisReport srep;
  srep.best_riskmap = -0.05;
  srep.candidates_used = 459;
  srep.riskmaps = {0.1, -0.05};
  srep.best_index = 1;
  const json sj = to_json(srep);
  CHECK(sj["best_riskmap"].get<double>() == -0.05);
  CHECK(sj["candidates_used"].get<std::uint64_t>() == 459);
  CHECK(sj["best_index"].get<std::uint64_t>() == 1);
  CHECK(sj["best_params"]["p1"].get<double>() == srep.best_params.p1);

  // Timestamps look like ISO-8601 UTC.
  const std::string ts = timestamp_utc();
  CHECK(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
}
