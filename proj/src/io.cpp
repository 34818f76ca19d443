#include "riskbound/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "riskbound/errors.hpp"

namespace riskbound {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  require(ec == std::errc(), "format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  require(end != begin && errno != ERANGE, "parse_double: not a number: " + text);
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  require(*end == '\0', "parse_double: trailing characters: " + text);
  return v;
}

namespace {

bool parses_as_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<double> read_samples(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "read_samples: cannot open " + path);
  std::vector<double> out;
  if (ends_with(path, ".json")) {
    json j;
    in >> j;
    const json* arr = &j;
    if (j.is_object()) {
      require(j.contains("samples"), "read_samples: no samples array in " + path);
      arr = &j.at("samples");
    }
    require(arr->is_array(), "read_samples: expected an array in " + path);
    for (const auto& v : *arr) {
      require(v.is_number(), "read_samples: non-numeric entry in " + path);
      out.push_back(v.get<double>());
    }
    return out;
  }
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = strip(line);
    if (t.empty()) continue;
    if (first && !parses_as_double(t)) {
      first = false;  // header line
      continue;
    }
    first = false;
    out.push_back(parse_double(t));
  }
  return out;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  require(out.good(), "write_lines: cannot open " + path);
  for (const auto& l : lines) out << l << "\n";
  require(out.good(), "write_lines: write failed for " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "read_lines: cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins) {
  require(!values.empty(), "histogram: no values");
  require(bins >= 1, "histogram: need at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  double width = (*hi_it - lo) / bins;
  if (width <= 0.0) width = 1.0;  // all values equal: single occupied bin
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) out[b].center = lo + width * (b + 0.5);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++out[b].count;
  }
  return out;
}

void write_histogram_csv(const std::string& path,
                         const std::vector<HistogramBin>& bins) {
  std::vector<std::string> lines;
  lines.reserve(bins.size() + 1);
  lines.push_back("value,count");
  for (const auto& b : bins)
    lines.push_back(format_double(b.center) + "," + std::to_string(b.count));
  write_lines(path, lines);
}

void write_trajectory_csv(const std::string& path, const sim::Trajectory& traj) {
  std::vector<std::string> lines;
  lines.reserve(traj.states.size() + 1);
  lines.push_back("t,x1,y1,theta1,x2,y2,theta2,x3,y3,theta3");
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    std::ostringstream row;
    row << format_double(static_cast<double>(k) * traj.timestep);
    for (const auto& a : traj.states[k].agents)
      row << "," << format_double(a.x) << "," << format_double(a.y) << ","
          << format_double(a.theta);
    lines.push_back(row.str());
  }
  write_lines(path, lines);
}

void write_values_csv(const std::string& path, const std::string& column,
                      const std::vector<double>& values) {
  std::vector<std::string> lines;
  lines.reserve(values.size() + 1);
  lines.push_back(column);
  for (double v : values) lines.push_back(format_double(v));
  write_lines(path, lines);
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
  require(obj.is_object(), context + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw std::invalid_argument(context + ": unknown key '" + item.key() + "'");
  }
}

json to_json(const SearchConfig& config) {
  json j = {{"t_min", config.t_min},
            {"t_max", config.t_max},
            {"t_points", config.t_points},
            {"mu_points", config.mu_points},
            {"refine_tol", config.refine_tol},
            {"max_evaluations", config.max_evaluations}};
  if (config.mu_min) j["mu_min"] = *config.mu_min;
  if (config.mu_max) j["mu_max"] = *config.mu_max;
  return j;
}

SearchConfig search_config_from_json(const json& j) {
  check_keys(j,
             {"t_min", "t_max", "t_points", "mu_points", "refine_tol",
              "max_evaluations", "mu_min", "mu_max"},
             "search config");
  SearchConfig c;
  c.t_min = j.value("t_min", c.t_min);
  c.t_max = j.value("t_max", c.t_max);
  c.t_points = j.value("t_points", c.t_points);
  c.mu_points = j.value("mu_points", c.mu_points);
  c.refine_tol = j.value("refine_tol", c.refine_tol);
  c.max_evaluations = j.value("max_evaluations", c.max_evaluations);
  if (j.contains("mu_min")) c.mu_min = j.at("mu_min").get<double>();
  if (j.contains("mu_max")) c.mu_max = j.at("mu_max").get<double>();
  c.validate();
  return c;
}

std::string noise_model_name(sim::NoiseModel model) {
  switch (model) {
    case sim::NoiseModel::none: return "none";
    case sim::NoiseModel::gaussian: return "gaussian";
    case sim::NoiseModel::uniform: return "uniform";
  }
  return "gaussian";
}

sim::NoiseModel noise_model_from_name(const std::string& name) {
  if (name == "none") return sim::NoiseModel::none;
  if (name == "gaussian") return sim::NoiseModel::gaussian;
  if (name == "uniform") return sim::NoiseModel::uniform;
  throw std::invalid_argument("unknown noise model '" + name +
                              "' (expected none|gaussian|uniform)");
}

json to_json(const sim::SimConfig& config) {
  return {{"dt", config.dt},
          {"horizon", config.horizon},
          {"noise_model", noise_model_name(config.noise)}};
}

sim::SimConfig sim_config_from_json(const json& j) {
  check_keys(j, {"dt", "horizon", "noise_model"}, "sim config");
  sim::SimConfig c;
  c.dt = j.value("dt", c.dt);
  c.horizon = j.value("horizon", c.horizon);
  if (j.contains("noise_model"))
    c.noise = noise_model_from_name(j.at("noise_model").get<std::string>());
  c.validate();
  return c;
}

json to_json(const sim::ControllerParams& params) {
  return {{"p1", params.p1}, {"p2", params.p2}, {"p3", params.p3},
          {"p4", params.p4}};
}

sim::ControllerParams params_from_json(const json& j) {
  check_keys(j, {"p1", "p2", "p3", "p4"}, "controller params");
  sim::ControllerParams p;
  p.p1 = j.value("p1", p.p1);
  p.p2 = j.value("p2", p.p2);
  p.p3 = j.value("p3", p.p3);
  p.p4 = j.value("p4", p.p4);
  p.validate();
  return p;
}

json to_json(const BoundResult& result) {
  return {{"bound", result.bound},
          {"arg_mu", result.arg_mu},
          {"arg_t", result.arg_t},
          {"evaluations", result.evaluations},
          {"confidence", result.confidence},
          {"edge_warning", result.edge_warning}};
}

json to_json(const VerificationReport& report) {
  return {{"bound_cvar", report.bound_cvar},
          {"bound_evar", report.bound_evar},
          {"cvar_detail", to_json(report.cvar_detail)},
          {"evar_detail", to_json(report.evar_detail)},
          {"n_used", report.n_used},
          {"alpha", report.alpha},
          {"epsilon", report.epsilon},
          {"gamma", report.gamma},
          {"master_seed", report.master_seed},
          {"expected_shortfall_floor",
           expected_shortfall_interpretation(report.bound_cvar)}};
}

json to_json(const SynthesisReport& report) {
  return {{"best_params", to_json(report.best_params)},
          {"best_riskmap", report.best_riskmap},
          {"best_index", report.best_index},
          {"candidates_used", report.candidates_used},
          {"n_inner", report.n_inner},
          {"alpha", report.alpha},
          {"epsilon_inner", report.epsilon_inner},
          {"gamma1", report.gamma1},
          {"epsilon2", report.epsilon2},
          {"gamma2", report.gamma2},
          {"master_seed", report.master_seed},
          {"common_random_numbers", report.common_random_numbers},
          {"expected_shortfall_floor",
           expected_shortfall_interpretation(report.best_riskmap)}};
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace riskbound
