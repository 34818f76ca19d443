#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "riskbound/g_entropic.hpp"
#include "riskbound/sim.hpp"
#include "riskbound/verify_synth.hpp"

namespace riskbound {

using json = nlohmann::json;

// Shortest decimal form that parses back to the same bits. Used for
// every number written to CSV so replays compare exactly.
std::string format_double(double v);
double parse_double(const std::string& text);

// Sample input: JSON (array, or object with a "samples" array) when the
// file ends in .json, else CSV/plain text with one value per line. A
// first line that does not parse as a number is treated as a header.
std::vector<double> read_samples(const std::string& path);

void write_lines(const std::string& path, const std::vector<std::string>& lines);
std::vector<std::string> read_lines(const std::string& path);

struct HistogramBin {
  double center = 0.0;
  std::uint64_t count = 0;
};
std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins);
void write_histogram_csv(const std::string& path,
                         const std::vector<HistogramBin>& bins);

void write_trajectory_csv(const std::string& path, const sim::Trajectory& traj);

// Values CSV: header line, then one formatted value per row.
void write_values_csv(const std::string& path, const std::string& column,
                      const std::vector<double>& values);

// Rejects keys outside `allowed`; typos in config files should fail
// loudly, not be ignored.
void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context);

json to_json(const SearchConfig& config);
SearchConfig search_config_from_json(const json& j);

json to_json(const sim::SimConfig& config);
sim::SimConfig sim_config_from_json(const json& j);

json to_json(const sim::ControllerParams& params);
sim::ControllerParams params_from_json(const json& j);

std::string noise_model_name(sim::NoiseModel model);
sim::NoiseModel noise_model_from_name(const std::string& name);

json to_json(const BoundResult& result);
json to_json(const VerificationReport& report);
json to_json(const SynthesisReport& report);

// UTC wall-clock in ISO-8601; the one report field excluded from
// replay comparisons.
std::string timestamp_utc();

}  // namespace riskbound
