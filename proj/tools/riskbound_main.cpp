// riskbound: sample-based risk bounds, scenario decision selection, and
// multi-agent verification/synthesis from the command line.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskbound/decision_select.hpp"
#include "riskbound/distributions.hpp"
#include "riskbound/errors.hpp"
#include "riskbound/g_entropic.hpp"
#include "riskbound/io.hpp"
#include "riskbound/risk_core.hpp"
#include "riskbound/rng.hpp"
#include "riskbound/sim.hpp"
#include "riskbound/verify_synth.hpp"
#include "riskbound/version.hpp"

namespace {

using riskbound::json;

// Loads a config file. A previously emitted report is accepted directly:
// its echoed "config" object is what gets replayed.
json load_config(const std::string& path) {
  std::ifstream in(path);
  riskbound::require(in.good(), "cannot open config file " + path);
  json j;
  in >> j;
  if (j.is_object() && j.contains("config") && j.contains("tool"))
    return j.at("config");
  return j;
}

// Field resolution order: explicit flag, then config file, then default.
template <typename T>
T pick(const CLI::Option* flag, const T& flag_value, const json& cfg,
       const std::string& key, const T& fallback) {
  if (flag && flag->count() > 0) return flag_value;
  if (cfg.contains(key)) return cfg.at(key).get<T>();
  return fallback;
}

std::uint64_t pick_seed(const CLI::Option* flag, std::uint64_t flag_value,
                        const json& cfg) {
  if (flag && flag->count() > 0) return flag_value;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  throw std::invalid_argument(
      "a master seed is required (--seed or config key 'seed')");
}

json make_report(const std::string& command, json config, json results) {
  return {{"tool", "riskbound"},
          {"version", riskbound::kVersion},
          {"command", command},
          {"timestamp", riskbound::timestamp_utc()},
          {"config", std::move(config)},
          {"results", std::move(results)}};
}

void emit_report(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2);
  std::cout << text << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    riskbound::require(out.good(), "cannot open output file " + out_path);
    out << text << "\n";
  }
}

riskbound::SearchConfig search_from(const json& cfg) {
  if (cfg.contains("search"))
    return riskbound::search_config_from_json(cfg.at("search"));
  return {};
}

struct SimFlagSet {
  CLI::Option* dt_opt = nullptr;
  CLI::Option* noise_opt = nullptr;
  CLI::Option* horizon_opt = nullptr;
  double dt = 0.033;
  std::string noise = "gaussian";
  double horizon = 30.0;

  void attach(CLI::App* cmd) {
    dt_opt = cmd->add_option("--dt", dt, "integration step, seconds");
    noise_opt =
        cmd->add_option("--noise", noise, "noise model: none|gaussian|uniform");
    horizon_opt = cmd->add_option("--horizon", horizon, "rollout length, seconds");
  }

  riskbound::sim::SimConfig resolve(const json& cfg) const {
    riskbound::sim::SimConfig base;
    if (cfg.contains("sim")) base = riskbound::sim_config_from_json(cfg.at("sim"));
    if (cfg.contains("dt")) base.dt = cfg.at("dt").get<double>();
    if (cfg.contains("noise_model"))
      base.noise = riskbound::noise_model_from_name(
          cfg.at("noise_model").get<std::string>());
    if (cfg.contains("horizon")) base.horizon = cfg.at("horizon").get<double>();
    if (dt_opt->count()) base.dt = dt;
    if (noise_opt->count()) base.noise = riskbound::noise_model_from_name(noise);
    if (horizon_opt->count()) base.horizon = horizon;
    base.validate();
    return base;
  }

  static json echo(const riskbound::sim::SimConfig& sim) {
    return riskbound::to_json(sim);
  }
};

riskbound::sim::ControllerParams params_from(const CLI::Option* flag,
                                             const std::vector<double>& values,
                                             const json& cfg) {
  riskbound::sim::ControllerParams p;
  if (cfg.contains("params")) {
    if (cfg.at("params").is_array()) {
      const auto arr = cfg.at("params").get<std::vector<double>>();
      riskbound::require(arr.size() == 4, "params: expected 4 gains");
      p = {arr[0], arr[1], arr[2], arr[3]};
    } else {
      p = riskbound::params_from_json(cfg.at("params"));
    }
  }
  if (flag && flag->count() > 0) {
    riskbound::require(values.size() == 4, "--params expects 4 gains");
    p = {values[0], values[1], values[2], values[3]};
  }
  p.validate();
  return p;
}

int cmd_min_samples(double gamma, double epsilon) {
  std::cout << riskbound::min_samples({epsilon, gamma}) << "\n";
  return 0;
}

int cmd_bound(const std::string& kind, const std::string& samples_path,
              std::optional<double> ell, double alpha, double epsilon,
              const std::string& search_path, const std::string& out_path) {
  riskbound::SampleSet samples(riskbound::read_samples(samples_path));
  riskbound::SearchConfig search;
  if (!search_path.empty()) {
    std::ifstream in(search_path);
    riskbound::require(in.good(), "cannot open search config " + search_path);
    json j;
    in >> j;
    search = riskbound::search_config_from_json(j);
  }

  riskbound::require(kind == "var" || kind == "expect" || kind == "cvar" ||
                         kind == "evar",
                     "unknown bound kind '" + kind +
                         "' (expected var|expect|cvar|evar)");
  json config = {{"kind", kind},
                 {"samples", samples_path},
                 {"epsilon", epsilon},
                 {"search", riskbound::to_json(search)}};
  json results;
  const std::uint64_t n = samples.size();
  if (kind == "var") {
    results["bound"] = riskbound::scenario_max(samples);
    results["confidence"] = riskbound::var_bound_confidence(n, epsilon);
  } else {
    riskbound::require(ell.has_value(),
                       "--ell is required for kind " + kind);
    config["ell"] = *ell;
    const riskbound::EssentialBound bound{*ell};
    if (kind == "expect") {
      results["bound"] = riskbound::expectation_bound(
          riskbound::scenario_max(samples), bound, epsilon);
      results["confidence"] = riskbound::var_bound_confidence(n, epsilon);
    } else {
      config["alpha"] = alpha;
      const riskbound::BoundResult r =
          kind == "cvar"
              ? riskbound::bound_cvar(samples, bound, alpha, epsilon, search)
              : riskbound::bound_evar(samples, bound, alpha, epsilon, search);
      results = riskbound::to_json(r);
    }
  }
  results["n_samples"] = n;
  emit_report(make_report("bound", config, results), out_path);
  return 0;
}

int cmd_validate(const json& cfg, const CLI::App* cmd, std::uint64_t seed,
                 const std::string& fixture, std::uint64_t trials,
                 std::uint64_t n, double epsilon, double alpha,
                 const std::string& measure, const std::string& csv_path,
                 const std::string& out_path, unsigned workers) {
  riskbound::check_keys(cfg,
                        {"fixture", "trials", "n", "epsilon", "alpha",
                         "measure", "seed", "workers"},
                        "validate config");
  const auto* ft = cmd->get_option("--fixture");
  const auto* tt = cmd->get_option("--trials");
  const auto* nt = cmd->get_option("--n");
  const auto* et = cmd->get_option("--epsilon");
  const auto* at = cmd->get_option("--alpha");
  const auto* mt = cmd->get_option("--measure");
  const std::string fixture_v = pick<std::string>(ft, fixture, cfg, "fixture", "multimodal");
  const std::uint64_t trials_v = pick<std::uint64_t>(tt, trials, cfg, "trials", 50);
  const std::uint64_t n_v = pick<std::uint64_t>(nt, n, cfg, "n", 149);
  const double epsilon_v = pick<double>(et, epsilon, cfg, "epsilon", 0.02);
  const double alpha_v = pick<double>(at, alpha, cfg, "alpha", 0.1);
  const std::string measure_v = pick<std::string>(mt, measure, cfg, "measure", "cvar");
  riskbound::require(trials_v >= 1, "validate: need at least one trial");
  riskbound::require(n_v >= 1, "validate: need at least one sample per trial");
  riskbound::require(measure_v == "cvar" || measure_v == "evar",
                     "validate: measure must be cvar or evar");

  riskbound::GaussianMixture dist;
  if (fixture_v == "multimodal") {
    dist = riskbound::multimodal_fixture();
  } else if (fixture_v == "constant") {
    dist = {{{1.0, 0.5, 1e-9}}, 0.5};
  } else if (fixture_v == "uniform_like") {
    dist = {{{1.0, 0.5, 0.35}}, 1.0};
  } else {
    throw std::invalid_argument("unknown fixture '" + fixture_v + "'");
  }
  dist.validate();
  const double ell = *dist.upper;

  // Truth from a large oracle draw on its own stream.
  auto truth_rng = riskbound::make_rng(riskbound::derive_seed(seed, 0x0a11));
  std::vector<double> truth_draws(20000);
  for (auto& v : truth_draws) v = dist.sample(truth_rng);
  const riskbound::SampleSet truth_set(std::move(truth_draws));
  const double truth = measure_v == "cvar"
                           ? riskbound::empirical_cvar(truth_set, alpha_v)
                           : riskbound::empirical_evar(truth_set, alpha_v);

  std::vector<double> bounds(trials_v);
  riskbound::parallel_for(trials_v, workers, [&](std::size_t trial) {
    auto rng =
        riskbound::make_rng(riskbound::derive_seed(seed, 0x0b22, trial));
    std::vector<double> draws(n_v);
    for (auto& v : draws) v = dist.sample(rng);
    const riskbound::SampleSet set(std::move(draws));
    const riskbound::EssentialBound bound{ell};
    bounds[trial] =
        measure_v == "cvar"
            ? riskbound::bound_cvar(set, bound, alpha_v, epsilon_v).bound
            : riskbound::bound_evar(set, bound, alpha_v, epsilon_v).bound;
  });

  std::uint64_t covered = 0;
  std::vector<std::string> rows = {"trial,bound,truth,covered"};
  for (std::uint64_t trial = 0; trial < trials_v; ++trial) {
    const bool ok = bounds[trial] >= truth;
    covered += ok ? 1 : 0;
    rows.push_back(std::to_string(trial) + "," +
                   riskbound::format_double(bounds[trial]) + "," +
                   riskbound::format_double(truth) + "," + (ok ? "1" : "0"));
  }
  if (!csv_path.empty()) riskbound::write_lines(csv_path, rows);

  json config = {{"fixture", fixture_v}, {"trials", trials_v},
                 {"n", n_v},             {"epsilon", epsilon_v},
                 {"alpha", alpha_v},     {"measure", measure_v},
                 {"seed", seed}};
  json results = {{"truth", truth},
                  {"covered", covered},
                  {"coverage", static_cast<double>(covered) /
                                   static_cast<double>(trials_v)},
                  {"bounds", bounds}};
  emit_report(make_report("validate", config, results), out_path);
  return 0;
}

int cmd_tsp(const json& cfg, const CLI::App* cmd, std::uint64_t seed,
            std::uint64_t nodes, const std::string& instance_path, double gamma,
            double epsilon, const std::string& audit,
            const std::string& out_path, unsigned workers) {
  riskbound::check_keys(
      cfg, {"nodes", "instance", "gamma", "epsilon", "audit", "seed", "workers"},
      "tsp config");
  const auto* nt = cmd->get_option("--nodes");
  const auto* gt = cmd->get_option("--gamma");
  const auto* et = cmd->get_option("--epsilon");
  const auto* aut = cmd->get_option("--audit");
  const std::uint64_t nodes_v = pick<std::uint64_t>(nt, nodes, cfg, "nodes", 9);
  const double gamma_v = pick<double>(gt, gamma, cfg, "gamma", 0.95);
  const double epsilon_v = pick<double>(et, epsilon, cfg, "epsilon", 0.01);
  const std::string audit_v =
      pick<std::string>(aut, audit, cfg, "audit", std::string());

  riskbound::TspInstance instance;
  std::string instance_used = instance_path;
  if (instance_used.empty() && cfg.contains("instance"))
    instance_used = cfg.at("instance").get<std::string>();
  if (!instance_used.empty()) {
    std::ifstream in(instance_used);
    riskbound::require(in.good(), "cannot open instance file " + instance_used);
    json j;
    in >> j;
    riskbound::check_keys(j, {"nodes"}, "tsp instance");
    for (const auto& node : j.at("nodes")) {
      riskbound::require(node.is_array() && node.size() == 2,
                         "tsp instance: nodes must be [x, y] pairs");
      instance.nodes.emplace_back(node[0].get<double>(), node[1].get<double>());
    }
  } else {
    instance =
        riskbound::random_tsp_instance(nodes_v, riskbound::derive_seed(seed, 0x75b0));
  }
  instance.validate();

  const auto domain = riskbound::tsp_domain(instance);
  const auto report = riskbound::good_decision(
      domain, {epsilon_v, gamma_v}, seed, workers);

  json config = {{"gamma", gamma_v}, {"epsilon", epsilon_v}, {"seed", seed},
                 {"nodes", instance.nodes.size()}};
  if (!instance_used.empty()) config["instance"] = instance_used;
  if (!audit_v.empty()) config["audit"] = audit_v;
  json results = {{"tour", report.best_decision},
                  {"cost", -report.best_reward},
                  {"samples_used", report.samples_used}};
  if (audit_v == "exhaustive") {
    results["exact_violation_fraction"] =
        riskbound::tsp_exact_violation(instance, report.best_decision);
    results["exact_percentile"] =
        100.0 * (1.0 - results["exact_violation_fraction"].get<double>());
  } else if (!audit_v.empty()) {
    throw std::invalid_argument("unknown audit mode '" + audit_v + "'");
  }
  emit_report(make_report("tsp", config, results), out_path);
  return 0;
}

int cmd_verify(const json& cfg, const CLI::App* cmd, std::uint64_t seed,
               double alpha, double epsilon, double gamma,
               const riskbound::sim::ControllerParams& params,
               const riskbound::sim::SimConfig& sim_config,
               const std::string& hist_path, const std::string& out_path,
               unsigned workers, int hist_bins) {
  riskbound::check_keys(cfg,
                        {"alpha", "epsilon", "gamma", "seed", "params", "sim",
                         "search", "workers", "dt", "noise_model", "horizon"},
                        "verify config");
  const auto* at = cmd->get_option("--alpha");
  const auto* et = cmd->get_option("--epsilon");
  const auto* gt = cmd->get_option("--gamma");
  riskbound::VerifyConfig vc;
  vc.alpha = pick<double>(at, alpha, cfg, "alpha", 0.1);
  vc.epsilon = pick<double>(et, epsilon, cfg, "epsilon", 0.02);
  vc.gamma = pick<double>(gt, gamma, cfg, "gamma", 0.95);
  vc.seed = seed;
  vc.params = params;
  vc.sim = sim_config;
  vc.search = search_from(cfg);
  vc.workers = workers;

  const riskbound::VerificationReport report = riskbound::verify(vc);
  if (!hist_path.empty())
    riskbound::write_histogram_csv(
        hist_path, riskbound::histogram(report.robustness, hist_bins));

  json config = {{"alpha", vc.alpha},
                 {"epsilon", vc.epsilon},
                 {"gamma", vc.gamma},
                 {"seed", seed},
                 {"params", riskbound::to_json(vc.params)},
                 {"sim", riskbound::to_json(vc.sim)},
                 {"search", riskbound::to_json(vc.search)}};
  emit_report(make_report("verify", config, riskbound::to_json(report)),
              out_path);
  return 0;
}

int cmd_synthesize(const json& cfg, const CLI::App* cmd, std::uint64_t seed,
                   double alpha, double epsilon_inner, double gamma1,
                   double epsilon2, double gamma2, std::uint64_t candidates,
                   std::uint64_t n_inner, bool crn,
                   const riskbound::sim::SimConfig& sim_config,
                   const std::string& hist_path, const std::string& out_path,
                   unsigned workers, int hist_bins) {
  riskbound::check_keys(
      cfg,
      {"alpha", "epsilon_inner", "gamma1", "epsilon2", "gamma2", "seed",
       "candidates", "n_inner", "common_random_numbers", "sim", "search",
       "workers", "dt", "noise_model", "horizon"},
      "synthesize config");
  const auto* at = cmd->get_option("--alpha");
  const auto* eit = cmd->get_option("--epsilon-inner");
  const auto* g1t = cmd->get_option("--gamma1");
  const auto* e2t = cmd->get_option("--epsilon2");
  const auto* g2t = cmd->get_option("--gamma2");
  const auto* ct = cmd->get_option("--candidates");
  const auto* nit = cmd->get_option("--n-inner");
  const auto* crnt = cmd->get_option("--crn");

  riskbound::SynthesisConfig sc;
  sc.alpha = pick<double>(at, alpha, cfg, "alpha", 0.1);
  sc.epsilon_inner = pick<double>(eit, epsilon_inner, cfg, "epsilon_inner", 0.02);
  sc.gamma1 = pick<double>(g1t, gamma1, cfg, "gamma1", 0.95);
  sc.epsilon2 = pick<double>(e2t, epsilon2, cfg, "epsilon2", 0.01);
  sc.gamma2 = pick<double>(g2t, gamma2, cfg, "gamma2", 0.99);
  sc.candidates = pick<std::uint64_t>(ct, candidates, cfg, "candidates", 0);
  sc.n_inner = pick<std::uint64_t>(nit, n_inner, cfg, "n_inner", 0);
  sc.common_random_numbers =
      pick<bool>(crnt, crn, cfg, "common_random_numbers", false);
  sc.seed = seed;
  sc.sim = sim_config;
  sc.search = search_from(cfg);
  sc.workers = workers;

  const riskbound::SynthesisReport report = riskbound::synthesize(sc);
  if (!hist_path.empty())
    riskbound::write_histogram_csv(hist_path,
                                   riskbound::histogram(report.riskmaps, hist_bins));

  json config = {{"alpha", sc.alpha},
                 {"epsilon_inner", sc.epsilon_inner},
                 {"gamma1", sc.gamma1},
                 {"epsilon2", sc.epsilon2},
                 {"gamma2", sc.gamma2},
                 {"seed", seed},
                 {"candidates", sc.candidates},
                 {"n_inner", sc.n_inner},
                 {"common_random_numbers", sc.common_random_numbers},
                 {"sim", riskbound::to_json(sc.sim)},
                 {"search", riskbound::to_json(sc.search)}};
  emit_report(make_report("synthesize", config, riskbound::to_json(report)),
              out_path);
  return 0;
}

int cmd_simulate(const json& cfg, std::uint64_t seed,
                 const riskbound::sim::ControllerParams& params,
                 const riskbound::sim::SimConfig& sim_config,
                 const std::string& csv_path, const std::string& out_path) {
  riskbound::check_keys(
      cfg, {"seed", "params", "sim", "workers", "dt", "noise_model", "horizon"},
      "simulate config");
  const riskbound::sim::ScenarioDraw draw = riskbound::sim::draw_scenario(seed);
  const riskbound::sim::Trajectory traj =
      riskbound::sim::rollout(draw, params, sim_config);
  if (!csv_path.empty()) riskbound::write_trajectory_csv(csv_path, traj);

  double min_dist = riskbound::sim::min_pairwise_distance(traj.states.front());
  for (const auto& s : traj.states)
    min_dist = std::min(min_dist, riskbound::sim::min_pairwise_distance(s));

  json config = {{"seed", seed},
                 {"params", riskbound::to_json(params)},
                 {"sim", riskbound::to_json(sim_config)}};
  json results = {{"min_pairwise_distance", min_dist},
                  {"steps", traj.states.size() - 1},
                  {"initial", {{"agents", json::array()}}},
                  {"goals", json::array()}};
  // The trajectory score needs the full metric window.
  if (sim_config.horizon >= riskbound::sim::kMetricHorizon)
    results["robustness"] = riskbound::sim::robustness(traj);
  for (const auto& a : draw.initial.agents)
    results["initial"]["agents"].push_back({a.x, a.y, a.theta});
  for (const auto& g : draw.goals) results["goals"].push_back({g.x, g.y});
  emit_report(make_report("simulate", config, results), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sample-based risk bounds, scenario selection, and controller synthesis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", riskbound::kVersion);

  // min-samples
  auto* ms = app.add_subcommand("min-samples",
                                "samples needed for a quantile bound at given confidence");
  double ms_gamma = 0.0, ms_epsilon = 0.0;
  ms->add_option("--gamma", ms_gamma, "required confidence in [0,1)")->required();
  ms->add_option("--epsilon", ms_epsilon, "tolerated tail mass in (0,1)")->required();

  // bound
  auto* bd = app.add_subcommand("bound", "risk bound from a sample file");
  std::string bd_kind = "cvar", bd_samples, bd_search, bd_out;
  double bd_ell = 0.0, bd_alpha = 0.1, bd_epsilon = 0.0;
  bd->add_option("--kind", bd_kind, "var|expect|cvar|evar");
  bd->add_option("--samples", bd_samples, "sample file (csv or json)")->required();
  auto* bd_ell_opt = bd->add_option("--ell", bd_ell, "essential upper bound");
  bd->add_option("--alpha", bd_alpha, "risk level for cvar/evar");
  bd->add_option("--epsilon", bd_epsilon, "tolerated tail mass")->required();
  bd->add_option("--search", bd_search, "optimizer settings json");
  bd->add_option("--out", bd_out, "write the report here as well");

  // shared campaign flags
  struct Campaign {
    CLI::Option* seed_opt = nullptr;
    std::uint64_t seed = 0;
    std::string config_path, out;
    unsigned workers = 0;
    void attach(CLI::App* cmd) {
      seed_opt = cmd->add_option("--seed", seed, "master seed (required)");
      cmd->add_option("--config", config_path, "json config (flags override)");
      cmd->add_option("--out", out, "write the report here as well");
      cmd->add_option("--workers", workers, "worker threads (0 = auto)");
    }
    json load() const {
      return config_path.empty() ? json::object() : load_config(config_path);
    }
    unsigned resolve_workers(const json& cfg) const {
      if (workers > 0) return workers;
      if (cfg.contains("workers")) return cfg.at("workers").get<unsigned>();
      return 0;
    }
  };

  // validate
  auto* vd = app.add_subcommand("validate", "coverage campaign against an oracle truth");
  Campaign vd_c;
  vd_c.attach(vd);
  std::string vd_fixture = "multimodal", vd_measure = "cvar", vd_csv;
  std::uint64_t vd_trials = 50, vd_n = 149;
  double vd_epsilon = 0.02, vd_alpha = 0.1;
  vd->add_option("--fixture", vd_fixture, "multimodal|constant|uniform_like");
  vd->add_option("--trials", vd_trials, "number of campaigns");
  vd->add_option("--n", vd_n, "samples per campaign");
  vd->add_option("--epsilon", vd_epsilon, "tolerated tail mass");
  vd->add_option("--alpha", vd_alpha, "risk level");
  vd->add_option("--measure", vd_measure, "cvar|evar");
  vd->add_option("--csv", vd_csv, "per-trial csv (trial,bound,truth,covered)");

  // tsp
  auto* tp = app.add_subcommand("tsp", "pick a good tour by scenario sampling");
  Campaign tp_c;
  tp_c.attach(tp);
  std::uint64_t tp_nodes = 9;
  double tp_gamma = 0.95, tp_epsilon = 0.01;
  std::string tp_instance, tp_audit;
  tp->add_option("--nodes", tp_nodes, "random instance size");
  tp->add_option("--instance", tp_instance, "instance json {\"nodes\":[[x,y],...]}");
  tp->add_option("--gamma", tp_gamma, "required confidence");
  tp->add_option("--epsilon", tp_epsilon, "tolerated better-tour fraction");
  tp->add_option("--audit", tp_audit, "exhaustive: report the exact percentile");

  // verify
  auto* vf = app.add_subcommand("verify", "bound the risk of low robustness");
  Campaign vf_c;
  vf_c.attach(vf);
  double vf_alpha = 0.1, vf_epsilon = 0.02, vf_gamma = 0.95;
  std::vector<double> vf_params;
  std::string vf_hist;
  int vf_bins = 40;
  vf->add_option("--alpha", vf_alpha, "risk level");
  vf->add_option("--epsilon", vf_epsilon, "tolerated tail mass");
  vf->add_option("--gamma", vf_gamma, "required confidence");
  auto* vf_params_opt =
      vf->add_option("--params", vf_params, "controller gains p1 p2 p3 p4")
          ->expected(4);
  vf->add_option("--hist", vf_hist, "robustness histogram csv");
  vf->add_option("--hist-bins", vf_bins, "histogram bin count");
  SimFlagSet vf_sim;
  vf_sim.attach(vf);

  // synthesize
  auto* sy = app.add_subcommand("synthesize", "pick low-riskmap controller gains");
  Campaign sy_c;
  sy_c.attach(sy);
  double sy_alpha = 0.1, sy_ei = 0.02, sy_g1 = 0.95, sy_e2 = 0.01, sy_g2 = 0.99;
  std::uint64_t sy_cand = 0, sy_ninner = 0;
  bool sy_crn = false;
  std::string sy_hist;
  int sy_bins = 40;
  sy->add_option("--alpha", sy_alpha, "risk level of the inner bound");
  sy->add_option("--epsilon-inner", sy_ei, "inner tail mass");
  sy->add_option("--gamma1", sy_g1, "inner confidence");
  sy->add_option("--epsilon2", sy_e2, "tolerated better-gain fraction");
  sy->add_option("--gamma2", sy_g2, "outer confidence");
  sy->add_option("--candidates", sy_cand, "candidate count override");
  sy->add_option("--n-inner", sy_ninner, "inner batch size override");
  sy->add_flag("--crn", sy_crn, "share one inner batch across candidates");
  sy->add_option("--hist", sy_hist, "riskmap histogram csv");
  sy->add_option("--hist-bins", sy_bins, "histogram bin count");
  SimFlagSet sy_sim;
  sy_sim.attach(sy);

  // simulate
  auto* sm = app.add_subcommand("simulate", "single seeded rollout export");
  Campaign sm_c;
  sm_c.attach(sm);
  std::vector<double> sm_params;
  std::string sm_csv;
  auto* sm_params_opt =
      sm->add_option("--params", sm_params, "controller gains p1 p2 p3 p4")
          ->expected(4);
  sm->add_option("--csv", sm_csv, "trajectory csv path");
  SimFlagSet sm_sim;
  sm_sim.attach(sm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return 2;
  }

  try {
    if (ms->parsed()) return cmd_min_samples(ms_gamma, ms_epsilon);
    if (bd->parsed()) {
      std::optional<double> ell;
      if (bd_ell_opt->count() > 0) ell = bd_ell;
      return cmd_bound(bd_kind, bd_samples, ell, bd_alpha, bd_epsilon,
                       bd_search, bd_out);
    }
    if (vd->parsed()) {
      const json cfg = vd_c.load();
      return cmd_validate(cfg, vd, pick_seed(vd_c.seed_opt, vd_c.seed, cfg),
                          vd_fixture, vd_trials, vd_n, vd_epsilon, vd_alpha,
                          vd_measure, vd_csv, vd_c.out,
                          vd_c.resolve_workers(cfg));
    }
    if (tp->parsed()) {
      const json cfg = tp_c.load();
      return cmd_tsp(cfg, tp, pick_seed(tp_c.seed_opt, tp_c.seed, cfg),
                     tp_nodes, tp_instance, tp_gamma, tp_epsilon, tp_audit,
                     tp_c.out, tp_c.resolve_workers(cfg));
    }
    if (vf->parsed()) {
      const json cfg = vf_c.load();
      return cmd_verify(cfg, vf, pick_seed(vf_c.seed_opt, vf_c.seed, cfg),
                        vf_alpha, vf_epsilon, vf_gamma,
                        params_from(vf_params_opt, vf_params, cfg),
                        vf_sim.resolve(cfg), vf_hist, vf_c.out,
                        vf_c.resolve_workers(cfg), vf_bins);
    }
    if (sy->parsed()) {
      const json cfg = sy_c.load();
      return cmd_synthesize(cfg, sy, pick_seed(sy_c.seed_opt, sy_c.seed, cfg),
                            sy_alpha, sy_ei, sy_g1, sy_e2, sy_g2, sy_cand,
                            sy_ninner, sy_crn, sy_sim.resolve(cfg), sy_hist,
                            sy_c.out, sy_c.resolve_workers(cfg), sy_bins);
    }
    if (sm->parsed()) {
      const json cfg = sm_c.load();
      return cmd_simulate(cfg, pick_seed(sm_c.seed_opt, sm_c.seed, cfg),
                          params_from(sm_params_opt, sm_params, cfg),
                          sm_sim.resolve(cfg), sm_csv, sm_c.out);
    }
  } catch (const riskbound::SearchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
