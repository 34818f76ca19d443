#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace riskbound::sim {

inline constexpr int kAgentCount = 3;
inline constexpr double kArenaXMin = -1.0;
inline constexpr double kArenaXMax = 1.0;
inline constexpr double kArenaYMin = -0.6;
inline constexpr double kArenaYMax = 0.6;
inline constexpr double kCollisionClearance = 0.15;  // pairwise, meters
inline constexpr double kGoalRadius = 0.1;
inline constexpr double kRobustnessFloor = -0.1;
inline constexpr double kSpawnMargin = 0.3;   // required h_g at time zero
inline constexpr double kMaxSpeed = 0.2;      // m/s
inline constexpr double kMaxTurnRate = 3.6;   // rad/s
inline constexpr double kMetricHorizon = 30.0;  // seconds scored by rho
inline constexpr double kNoiseSigma = 0.002;  // per-axis position noise, m
inline constexpr double kNoiseCut = 3.0;      // truncation, in sigmas

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct WorldState {
  std::array<AgentState, kAgentCount> agents;
  double time = 0.0;
};

using GoalSet = std::array<Vec2, kAgentCount>;

// Controller gains: p1 scales speed toward the goal, p2 and p3 shape the
// heading correction, p4 sets how hard the safety filter may brake.
struct ControllerParams {
  double p1 = 1.0;
  double p2 = 2.0;
  double p3 = 1.0;
  double p4 = 10.0;
  void validate() const;
};

// Admissible gain box for synthesis draws.
inline constexpr double kGainMin = 0.2;
inline constexpr double kGainMax = 5.0;
inline constexpr double kBrakeMin = 0.1;
inline constexpr double kBrakeMax = 200.0;

struct ScenarioDraw {
  WorldState initial;
  GoalSet goals;
  std::uint64_t seed = 0;  // noise stream for rollouts of this draw
};

enum class NoiseModel { none, gaussian, uniform };

struct SimConfig {
  double dt = 0.033;
  double horizon = 30.0;  // seconds
  NoiseModel noise = NoiseModel::gaussian;
  void validate() const;
};

struct Trajectory {
  double timestep = 0.0;
  std::vector<WorldState> states;
  ControllerParams params;
  ScenarioDraw draw;
};

// Safety margin: smallest pairwise planar distance minus the clearance.
double h_g(const WorldState& world);
// Goal closeness: max over agents of (capture radius - goal distance),
// nonnegative once an agent is inside its goal disc.
double h_f(const WorldState& world, const GoalSet& goals);
double min_pairwise_distance(const WorldState& world);

// Trajectory score. rho_g is the running minimum of h_g, rho_f the
// running maximum of h_f over the first kMetricHorizon seconds.
double combine_robustness(double rho_g, double rho_f);
double robustness(const Trajectory& trajectory);

// Nominal unicycle command toward a goal, before the safety filter.
void nominal_command(const AgentState& agent, const Vec2& goal,
                     const ControllerParams& params, double& v, double& omega);

// Adjusts forward speeds only, leaving headings untouched, so every
// agent pair satisfies its linearized separation constraint. Speeds stay
// in [0, kMaxSpeed]; an infeasible pair gets the most separating speeds
// the box allows.
void filter_speeds(const WorldState& world, const ControllerParams& params,
                   std::array<double, kAgentCount>& speeds);

WorldState step(const WorldState& world, const ControllerParams& params,
                const GoalSet& goals, std::mt19937_64* noise_rng,
                NoiseModel noise, double dt);

Trajectory rollout(const ScenarioDraw& draw, const ControllerParams& params,
                   const SimConfig& config = {});

// Rejection-samples initial poses (pairwise h_g >= kSpawnMargin) and
// goals (same margin between goal discs). attempts_out, when given,
// receives the total number of candidate draws consumed.
ScenarioDraw sample_scenario(std::mt19937_64& rng, int* attempts_out = nullptr);

// Scenario fully determined by a seed; rollout noise derives from the
// same seed on a separate stream.
ScenarioDraw draw_scenario(std::uint64_t seed);

}  // namespace riskbound::sim
