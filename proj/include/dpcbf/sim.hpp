// Copyright 2026 The DPCBF Safety Filter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPCBF__SIM_HPP_
#define DPCBF__SIM_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpcbf/barriers.hpp"
#include "dpcbf/kinematics.hpp"
#include "dpcbf/qp.hpp"

namespace dpcbf
{

class ScenarioGenerationError : public std::runtime_error
{
public:
  explicit ScenarioGenerationError(const std::string & what) : std::runtime_error(what) {}
};

struct Scenario
{
  RobotState start;
  Vec2 goal;
  std::vector<ObstacleState> obstacles;
  double duration{40.0};
  std::uint64_t seed{0};
};

/// Proportional goal-seeking reference with terminal slowdown.
struct ControllerGains
{
  double k_v{2.0};   // speed-error gain [1/s]
  double k_h{1.0};   // heading-error gain on the slip angle
  double k_d{1.0};   // terminal slowdown: v_des_eff = min(v_des, k_d * distance) [1/s]
  double v_des{3.0};
};

ControlInput nominal_controller(
  const RobotState & robot, Vec2 goal, const ControllerGains & gains, const InputLimits & limits);

struct ScenarioConfig
{
  std::size_t n_obstacles{0};
  double radius_cap{0.5};
  double radius_min{0.1};
  double obstacle_speed_max{1.2};
  double course_length{25.0};
  double corridor_width{10.0};
  double duration{40.0};
  double initial_speed{0.5};
  double min_spawn_distance{3.0};  // from the robot start, on top of s * r
  double robot_radius{0.3};
  double safety_buffer_s{1.05};
};

/// Robot at the origin heading along +x toward (course_length, 0); obstacles uniform in the
/// corridor x in [0, L], |y| <= W / 2, radii uniform in [radius_min, radius_cap], speeds uniform
/// in [0, obstacle_speed_max], headings uniform.
Scenario generate_scenario(const ScenarioConfig & config, std::uint64_t seed);

/// Ten inward-moving obstacles ringed around the robot.
Scenario surround_preset();

/// A single stationary obstacle blocking the straight path to the goal, centered 5 cm off the
/// path line.
Scenario blocking_obstacle_preset();

enum class TrialStatus
{
  kSuccess,
  kCollision,
  kInfeasible,
  kTimeout,
};

std::string_view to_string(TrialStatus status);
TrialStatus parse_status(std::string_view text);

struct TrajectorySample
{
  double t{0.0};
  RobotState robot;
  ControlInput u;
  double min_h{0.0};  // smallest barrier among obstacles in range; +inf when none, NaN if unfiltered
};

struct TrialResult
{
  TrialStatus status{TrialStatus::kTimeout};
  double t_end{0.0};
  double qp_cost_total{0.0};
  double min_clearance{0.0};  // smallest sqrt(|p_rel|^2 - r^2) seen; 0 on collision
  std::vector<TrajectorySample> trajectory;  // last entry is the terminal state with u = 0
  std::vector<std::vector<ObstacleState>> obstacle_history;  // parallel to trajectory
};

struct TrialSettings
{
  InputLimits limits;
  ControllerGains gains;
  double robot_radius{0.3};
  double dt{0.05};
  double goal_radius{0.5};
  bool dt_weighted_cost{false};
  bool record_trajectory{false};
};

/// Closed loop: nominal reference -> safety filter -> Euler step of robot and obstacles.
TrialResult run_trial(const Scenario & scenario, const BarrierMethod & method, const TrialSettings & settings);

struct ExperimentConfig
{
  std::vector<std::string> methods{"dpcbf", "c3bf"};
  std::vector<std::size_t> obstacle_counts{1, 10};
  std::vector<double> radius_caps{0.3, 0.5, 0.7};
  std::size_t trials_per_cell{50};
  std::uint64_t master_seed{0};
  std::size_t jobs{1};
};

/// Seed of trial `index` in cell (n_obstacles, radius_cap); independent of the method.
std::uint64_t trial_seed(
  std::uint64_t master_seed, std::size_t n_obstacles, double radius_cap, std::size_t index);

struct TrialRecord
{
  std::size_t trial_id{0};  // shared by every method run on the same scenario
  std::string method;
  std::size_t n_obstacles{0};
  double radius_cap{0.0};
  std::uint64_t seed{0};
  TrialResult result;
};

struct MetricsCell
{
  std::string method;
  std::size_t n_obstacles{0};
  double radius_cap{0.0};
  std::size_t trials{0};
  std::size_t generation_failures{0};
  double success_rate{0.0};
  double infeasible_rate{0.0};
  double collision_rate{0.0};
  double timeout_rate{0.0};
  double mean_qp_cost{0.0};
  double median_qp_cost{0.0};
};

using MetricsTable = std::vector<MetricsCell>;

struct GenerationFailure
{
  std::size_t trial_id{0};
  std::size_t n_obstacles{0};
  double radius_cap{0.0};
  std::uint64_t seed{0};
  std::string message;
};

struct ExperimentResult
{
  std::vector<TrialRecord> trials;  // ordered by (trial_id, method order)
  MetricsTable table;
  std::vector<GenerationFailure> generation_failures;
};

using MethodFactory = std::function<std::unique_ptr<BarrierMethod>(std::string_view)>;

MetricsTable aggregate(
  const std::vector<TrialRecord> & trials, const std::vector<GenerationFailure> & failures,
  const ExperimentConfig & config);

/// Runs every (cell, trial, method) combination. Work is spread over `config.jobs` threads;
/// output is independent of the thread count.
ExperimentResult run_experiment(
  const ExperimentConfig & config, const ScenarioConfig & scenario_base,
  const TrialSettings & settings, const MethodFactory & make_method);

}  // namespace dpcbf

#endif  // DPCBF__SIM_HPP_
