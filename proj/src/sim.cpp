#include "riskbound/sim.hpp"

#include <algorithm>
#include <cmath>

#include "riskbound/errors.hpp"
#include "riskbound/rng.hpp"

namespace riskbound::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kScenarioStream = 0x5c3a;
constexpr std::uint64_t kNoiseStream = 0x201e;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Shortest signed difference a - b, in (-pi, pi].
double angle_diff(double a, double b) {
  double d = std::fmod(a - b, 2.0 * kPi);
  if (d <= -kPi) d += 2.0 * kPi;
  if (d > kPi) d -= 2.0 * kPi;
  return d;
}

double clamp(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

double pair_distance(const AgentState& a, const AgentState& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Largest value of a.u over the speed box; the fallback when a pair
// constraint cannot be met.
void most_separating(const std::array<double, 2>& a, std::array<double, 2>& u) {
  u[0] = a[0] > 0.0 ? kMaxSpeed : 0.0;
  u[1] = a[1] > 0.0 ? kMaxSpeed : 0.0;
}

// Projects (vi, vj) onto { u in [0, kMaxSpeed]^2 : a.u >= rhs }. The
// projection is u = clamp(v + lambda a) for the smallest lambda >= 0
// meeting the constraint; a.clamp(v + lambda a) is nondecreasing in
// lambda, so bisection applies.
void project_pair(const std::array<double, 2>& a, double rhs,
                  std::array<double, 2>& v) {
  auto dot_at = [&](double lambda) {
    return a[0] * clamp(v[0] + lambda * a[0], 0.0, kMaxSpeed) +
           a[1] * clamp(v[1] + lambda * a[1], 0.0, kMaxSpeed);
  };
  if (dot_at(0.0) >= rhs) return;
  std::array<double, 2> corner;
  most_separating(a, corner);
  if (a[0] * corner[0] + a[1] * corner[1] < rhs) {
    v = corner;  // infeasible pair: brake/push apart as hard as possible
    return;
  }
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (dot_at(hi) < rhs && guard++ < 200) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (dot_at(mid) >= rhs)
      hi = mid;
    else
      lo = mid;
  }
  v[0] = clamp(v[0] + hi * a[0], 0.0, kMaxSpeed);
  v[1] = clamp(v[1] + hi * a[1], 0.0, kMaxSpeed);
}

}  // namespace

void ControllerParams::validate() const {
  require(p1 >= kGainMin && p1 <= kGainMax &&
          p2 >= kGainMin && p2 <= kGainMax &&
          p3 >= kGainMin && p3 <= kGainMax,
          "ControllerParams: gains p1..p3 must lie in [0.2, 5]");
  require(p4 >= kBrakeMin && p4 <= kBrakeMax,
          "ControllerParams: p4 must lie in [0.1, 200]");
}

void SimConfig::validate() const {
  require(dt > 0.0 && dt <= 0.5, "SimConfig: dt must lie in (0, 0.5]");
  require(horizon >= dt, "SimConfig: horizon shorter than one step");
}

double h_g(const WorldState& world) {
  double closest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kAgentCount; ++i)
    for (int j = i + 1; j < kAgentCount; ++j)
      closest = std::min(closest, pair_distance(world.agents[i], world.agents[j]));
  return closest - kCollisionClearance;
}

double min_pairwise_distance(const WorldState& world) {
  return h_g(world) + kCollisionClearance;
}

double h_f(const WorldState& world, const GoalSet& goals) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kAgentCount; ++i) {
    const double d = std::hypot(world.agents[i].x - goals[i].x,
                                world.agents[i].y - goals[i].y);
    best = std::max(best, kGoalRadius - d);
  }
  return best;
}

double combine_robustness(double rho_g, double rho_f) {
  if (rho_g >= 0.0 && rho_f >= 0.0) return rho_g;
  if (rho_g < 0.0) return std::max(rho_g, kRobustnessFloor);
  return std::max(rho_f, kRobustnessFloor);
}

double robustness(const Trajectory& trajectory) {
  require(trajectory.timestep > 0.0, "robustness: timestep must be positive");
  require(!trajectory.states.empty(), "robustness: empty trajectory");
  const double covered =
      trajectory.timestep * static_cast<double>(trajectory.states.size() - 1);
  require(covered >= kMetricHorizon - 1e-9,
          "robustness: trajectory shorter than the scored horizon");
  double rho_g = std::numeric_limits<double>::infinity();
  double rho_f = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    if (static_cast<double>(k) * trajectory.timestep > kMetricHorizon + 1e-9)
      break;
    rho_g = std::min(rho_g, h_g(trajectory.states[k]));
    rho_f = std::max(rho_f, h_f(trajectory.states[k], trajectory.draw.goals));
  }
  return combine_robustness(rho_g, rho_f);
}

void nominal_command(const AgentState& agent, const Vec2& goal,
                     const ControllerParams& params, double& v, double& omega) {
  const double dx = goal.x - agent.x;
  const double dy = goal.y - agent.y;
  const double dist = std::hypot(dx, dy);
  const double target = std::atan2(dy, dx);
  const double err = angle_diff(target, agent.theta);
  v = clamp(params.p1 * dist * std::cos(err), 0.0, kMaxSpeed);
  omega = clamp(params.p2 * err + params.p3 * std::sin(err) * std::cos(err),
                -kMaxTurnRate, kMaxTurnRate);
  if (dist < 1e-12) omega = 0.0;  // at the goal the bearing is undefined
}

void filter_speeds(const WorldState& world, const ControllerParams& params,
                   std::array<double, kAgentCount>& speeds) {
  std::array<std::array<double, 2>, kAgentCount> heading;
  for (int i = 0; i < kAgentCount; ++i)
    heading[i] = {std::cos(world.agents[i].theta),
                  std::sin(world.agents[i].theta)};
  // Pairwise constraints share variables, so sweep until a pass leaves
  // every pair satisfied (or the sweep budget runs out).
  for (int sweep = 0; sweep < 10; ++sweep) {
    bool clean = true;
    for (int i = 0; i < kAgentCount; ++i) {
      for (int j = i + 1; j < kAgentCount; ++j) {
        const double ddx = world.agents[i].x - world.agents[j].x;
        const double ddy = world.agents[i].y - world.agents[j].y;
        const double h = ddx * ddx + ddy * ddy -
                         kCollisionClearance * kCollisionClearance;
        // d/dt of the squared-distance margin along the headings.
        const std::array<double, 2> a = {
            2.0 * (ddx * heading[i][0] + ddy * heading[i][1]),
            -2.0 * (ddx * heading[j][0] + ddy * heading[j][1])};
        const double rhs = -params.p4 * h;
        std::array<double, 2> v = {speeds[i], speeds[j]};
        if (a[0] * v[0] + a[1] * v[1] >= rhs - 1e-12) continue;
        clean = false;
        project_pair(a, rhs, v);
        speeds[i] = v[0];
        speeds[j] = v[1];
      }
    }
    if (clean) break;
  }
}

WorldState step(const WorldState& world, const ControllerParams& params,
                const GoalSet& goals, std::mt19937_64* noise_rng,
                NoiseModel noise, double dt) {
  require(dt > 0.0, "step: dt must be positive");
  require(noise == NoiseModel::none || noise_rng != nullptr,
          "step: noise model needs an rng");
  std::array<double, kAgentCount> v{};
  std::array<double, kAgentCount> w{};
  for (int i = 0; i < kAgentCount; ++i)
    nominal_command(world.agents[i], goals[i], params, v[i], w[i]);
  filter_speeds(world, params, v);

  WorldState next = world;
  next.time = world.time + dt;
  for (int i = 0; i < kAgentCount; ++i) {
    AgentState& a = next.agents[i];
    a.x += dt * v[i] * std::cos(a.theta);
    a.y += dt * v[i] * std::sin(a.theta);
    a.theta = wrap_angle(a.theta + dt * w[i]);
    if (noise == NoiseModel::gaussian && noise_rng) {
      a.x += truncated_gaussian(*noise_rng, kNoiseSigma, kNoiseCut);
      a.y += truncated_gaussian(*noise_rng, kNoiseSigma, kNoiseCut);
    } else if (noise == NoiseModel::uniform && noise_rng) {
      const double b = kNoiseSigma * kNoiseCut;
      a.x += uniform_real(*noise_rng, -b, b);
      a.y += uniform_real(*noise_rng, -b, b);
    }
    a.x = clamp(a.x, kArenaXMin, kArenaXMax);
    a.y = clamp(a.y, kArenaYMin, kArenaYMax);
  }
  return next;
}

Trajectory rollout(const ScenarioDraw& draw, const ControllerParams& params,
                   const SimConfig& config) {
  config.validate();
  params.validate();
  const int steps = static_cast<int>(std::ceil(config.horizon / config.dt - 1e-9));
  Trajectory traj;
  traj.timestep = config.dt;
  traj.params = params;
  traj.draw = draw;
  traj.states.reserve(steps + 1);
  traj.states.push_back(draw.initial);
  auto noise_rng = make_rng(derive_seed(draw.seed, kNoiseStream));
  std::mt19937_64* rng_ptr =
      config.noise == NoiseModel::none ? nullptr : &noise_rng;
  for (int k = 0; k < steps; ++k) {
    traj.states.push_back(step(traj.states.back(), params, draw.goals, rng_ptr,
                               config.noise, config.dt));
    traj.states.back().time = config.dt * (k + 1);  // avoid additive drift
  }
  return traj;
}

ScenarioDraw sample_scenario(std::mt19937_64& rng, int* attempts_out) {
  ScenarioDraw draw;
  int attempts = 0;
  const int cap = 100000;
  bool ok = false;
  for (; attempts < cap && !ok; ) {
    ++attempts;
    for (auto& agent : draw.initial.agents) {
      agent.x = uniform_real(rng, kArenaXMin, kArenaXMax);
      agent.y = uniform_real(rng, kArenaYMin, kArenaYMax);
      agent.theta = uniform_real(rng, 0.0, 2.0 * kPi);
    }
    ok = h_g(draw.initial) >= kSpawnMargin;
  }
  if (!ok) throw SearchError("sample_scenario: pose rejection cap reached");
  ok = false;
  for (int goal_attempts = 0; goal_attempts < cap && !ok; ) {
    ++goal_attempts;
    ++attempts;
    for (auto& goal : draw.goals) {
      goal.x = uniform_real(rng, kArenaXMin, kArenaXMax);
      goal.y = uniform_real(rng, kArenaYMin, kArenaYMax);
    }
    double closest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kAgentCount; ++i)
      for (int j = i + 1; j < kAgentCount; ++j)
        closest = std::min(closest, std::hypot(draw.goals[i].x - draw.goals[j].x,
                                               draw.goals[i].y - draw.goals[j].y));
    ok = closest - kCollisionClearance >= kSpawnMargin;
  }
  if (!ok) throw SearchError("sample_scenario: goal rejection cap reached");
  if (attempts_out) *attempts_out = attempts;
  return draw;
}

ScenarioDraw draw_scenario(std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, kScenarioStream));
  ScenarioDraw draw = sample_scenario(rng);
  draw.seed = seed;
  return draw;
}

}  // namespace riskbound::sim
