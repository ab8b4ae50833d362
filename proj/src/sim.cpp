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

#include "dpcbf/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <utility>

#include "dpcbf/rng.hpp"

namespace dpcbf
{

namespace
{

constexpr std::size_t kMaxPlacementRetries = 1000;

double clamp_sym(double x, double bound) { return std::clamp(x, -bound, bound); }

}  // namespace

ControlInput nominal_controller(
  const RobotState & robot, Vec2 goal, const ControllerGains & gains, const InputLimits & limits)
{
  const Vec2 to_goal = goal - robot.position();
  const double dist = norm(to_goal);
  const double bearing = dist > 0.0 ? std::atan2(to_goal.y, to_goal.x) : robot.theta;
  const double heading_err = wrap_angle(bearing - robot.theta);
  const double v_des_eff = std::min(gains.v_des, gains.k_d * dist);
  ControlInput u;
  u.beta = clamp_sym(gains.k_h * heading_err, limits.beta_max);
  u.a = clamp_sym(gains.k_v * (v_des_eff - robot.v), limits.a_max);
  return u;
}

Scenario generate_scenario(const ScenarioConfig & config, std::uint64_t seed)
{
  if (!(config.radius_cap >= config.radius_min) || !(config.radius_min > 0.0)) {
    throw ScenarioGenerationError("scenario.radius_cap must be >= radius_min > 0");
  }
  if (!(config.course_length > 0.0) || !(config.corridor_width >= 0.0)) {
    throw ScenarioGenerationError("scenario.course_length and corridor_width must be positive");
  }
  Rng rng(seed);
  Scenario s;
  s.seed = seed;
  s.duration = config.duration;
  s.start = RobotState{0.0, 0.0, 0.0, config.initial_speed};
  s.goal = Vec2{config.course_length, 0.0};
  s.obstacles.reserve(config.n_obstacles);
  const double half_w = 0.5 * config.corridor_width;
  for (std::size_t i = 0; i < config.n_obstacles; ++i) {
    const double radius = uniform(rng, config.radius_min, config.radius_cap);
    const double keep_out = std::max(
      config.min_spawn_distance + config.robot_radius + radius,
      config.safety_buffer_s * (config.robot_radius + radius));
    bool placed = false;
    for (std::size_t k = 0; k < kMaxPlacementRetries && !placed; ++k) {
      const double x = uniform(rng, 0.0, config.course_length);
      const double y = uniform(rng, -half_w, half_w);
      if (std::hypot(x, y) > keep_out) {
        ObstacleState o;
        o.x = x;
        o.y = y;
        o.radius = radius;
        s.obstacles.push_back(o);
        placed = true;
      }
    }
    if (!placed) {
      throw ScenarioGenerationError(
        "could not place obstacle " + std::to_string(i) + " outside the robot keep-out zone");
    }
    ObstacleState & o = s.obstacles.back();
    o.v_obs = uniform(rng, 0.0, config.obstacle_speed_max);
    o.theta_obs = wrap_angle(uniform(rng, -std::numbers::pi, std::numbers::pi));
  }
  return s;
}

Scenario surround_preset()
{
  constexpr std::size_t kCount = 10;
  constexpr double kRing = 6.0;
  constexpr double kSpeed = 0.5;
  constexpr double kRadius = 0.5;
  Scenario s;
  s.start = RobotState{0.0, 0.0, 0.0, 0.5};
  s.goal = Vec2{15.0, 0.0};
  s.duration = 40.0;
  for (std::size_t i = 0; i < kCount; ++i) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(i) / kCount;
    ObstacleState o;
    o.x = kRing * std::cos(ang);
    o.y = kRing * std::sin(ang);
    o.theta_obs = wrap_angle(ang + std::numbers::pi);
    o.v_obs = kSpeed;
    o.radius = kRadius;
    s.obstacles.push_back(o);
  }
  return s;
}

Scenario blocking_obstacle_preset()
{
  Scenario s;
  s.start = RobotState{0.0, 0.0, 0.0, 0.5};
  s.goal = Vec2{25.0, 0.0};
  s.duration = 40.0;
  ObstacleState o;
  o.x = 12.5;
  o.y = 0.05;  // exactly on the centerline C^beta vanishes and the filter can only brake
  o.radius = 0.5;
  s.obstacles.push_back(o);
  return s;
}

std::string_view to_string(TrialStatus status)
{
  switch (status) {
    case TrialStatus::kSuccess:
      return "success";
    case TrialStatus::kCollision:
      return "collision";
    case TrialStatus::kInfeasible:
      return "infeasible";
    case TrialStatus::kTimeout:
      return "timeout";
  }
  return "timeout";
}

TrialStatus parse_status(std::string_view text)
{
  for (TrialStatus s : {TrialStatus::kSuccess, TrialStatus::kCollision, TrialStatus::kInfeasible,
                        TrialStatus::kTimeout}) {
    if (to_string(s) == text) {
      return s;
    }
  }
  throw std::invalid_argument("unknown trial status '" + std::string(text) + "'");
}

TrialResult run_trial(const Scenario & scenario, const BarrierMethod & method, const TrialSettings & settings)
{
  settings.limits.validate();
  if (!(settings.dt > 0.0)) {
    throw std::invalid_argument("dt must be positive");
  }
  TrialResult result;
  result.min_clearance = std::numeric_limits<double>::infinity();
  RobotState robot = scenario.start;
  std::vector<ObstacleState> obstacles = scenario.obstacles;
  const auto max_steps = static_cast<std::size_t>(std::ceil(scenario.duration / settings.dt - 1e-9));

  const auto finish = [&](TrialStatus status, double min_h) {
    result.status = status;
    if (settings.record_trajectory) {
      result.trajectory.push_back(TrajectorySample{result.t_end, robot, ControlInput{}, min_h});
      result.obstacle_history.push_back(obstacles);
    }
    return result;
  };
  const double kNoFilter = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t step = 0;; ++step) {
    const double t = static_cast<double>(step) * settings.dt;
    result.t_end = t;

    for (const ObstacleState & o : obstacles) {
      const Vec2 p = o.position() - robot.position();
      const double p_norm = norm(p);
      const double r = settings.robot_radius + o.radius;
      if (p_norm <= r) {
        result.min_clearance = 0.0;
        return finish(TrialStatus::kCollision, kNoFilter);
      }
      result.min_clearance = std::min(result.min_clearance, std::sqrt((p_norm - r) * (p_norm + r)));
    }
    if (norm(scenario.goal - robot.position()) <= settings.goal_radius) {
      return finish(TrialStatus::kSuccess, kNoFilter);
    }
    if (step >= max_steps) {
      return finish(TrialStatus::kTimeout, kNoFilter);
    }

    const ControlInput u_ref = nominal_controller(robot, scenario.goal, settings.gains, settings.limits);
    const FilterResult filtered = safety_filter(
      robot, obstacles, u_ref, method, settings.limits, settings.robot_radius, settings.dt);
    double min_h = std::numeric_limits<double>::infinity();
    for (const BarrierEval & e : filtered.evals) {
      min_h = std::min(min_h, e.h);
    }
    if (filtered.status == FilterStatus::kCollision) {
      result.min_clearance = 0.0;
      return finish(TrialStatus::kCollision, kNoFilter);
    }
    if (filtered.status == FilterStatus::kInfeasible) {
      return finish(TrialStatus::kInfeasible, min_h);
    }
    const auto & opt = std::get<Optimal>(filtered.qp);
    result.qp_cost_total += settings.dt_weighted_cost ? opt.cost * settings.dt : opt.cost;

    if (settings.record_trajectory) {
      result.trajectory.push_back(TrajectorySample{t, robot, opt.u, min_h});
      result.obstacle_history.push_back(obstacles);
    }

    robot = bicycle_step(robot, opt.u, settings.dt, settings.limits.l_r);
    for (ObstacleState & o : obstacles) {
      o = obstacle_step(o, settings.dt);
    }
  }
}

std::uint64_t trial_seed(
  std::uint64_t master_seed, std::size_t n_obstacles, double radius_cap, std::size_t index)
{
  return derive_seed(
    {master_seed, static_cast<std::uint64_t>(n_obstacles), std::bit_cast<std::uint64_t>(radius_cap),
     static_cast<std::uint64_t>(index)});
}

MetricsTable aggregate(
  const std::vector<TrialRecord> & trials, const std::vector<GenerationFailure> & failures,
  const ExperimentConfig & config)
{
  MetricsTable table;
  for (std::size_t n : config.obstacle_counts) {
    for (double cap : config.radius_caps) {
      std::size_t n_fail = 0;
      for (const GenerationFailure & f : failures) {
        if (f.n_obstacles == n && f.radius_cap == cap) {
          ++n_fail;
        }
      }
      for (const std::string & m : config.methods) {
        MetricsCell cell;
        cell.method = m;
        cell.n_obstacles = n;
        cell.radius_cap = cap;
        cell.generation_failures = n_fail;
        std::vector<double> costs;
        std::size_t counts[4] = {0, 0, 0, 0};
        for (const TrialRecord & rec : trials) {
          if (rec.method != m || rec.n_obstacles != n || rec.radius_cap != cap) {
            continue;
          }
          ++counts[static_cast<int>(rec.result.status)];
          costs.push_back(rec.result.qp_cost_total);
        }
        cell.trials = costs.size();
        if (cell.trials > 0) {
          const auto total = static_cast<double>(cell.trials);
          cell.success_rate = static_cast<double>(counts[0]) / total;
          cell.collision_rate = static_cast<double>(counts[1]) / total;
          cell.infeasible_rate = static_cast<double>(counts[2]) / total;
          cell.timeout_rate = static_cast<double>(counts[3]) / total;
          double sum = 0.0;
          for (double c : costs) {
            sum += c;
          }
          cell.mean_qp_cost = sum / total;
          std::sort(costs.begin(), costs.end());
          const std::size_t mid = costs.size() / 2;
          cell.median_qp_cost =
            costs.size() % 2 == 1 ? costs[mid] : 0.5 * (costs[mid - 1] + costs[mid]);
        }
        table.push_back(std::move(cell));
      }
    }
  }
  return table;
}

ExperimentResult run_experiment(
  const ExperimentConfig & config, const ScenarioConfig & scenario_base,
  const TrialSettings & settings, const MethodFactory & make_method)
{
  struct Job
  {
    std::size_t trial_id;
    std::size_t n_obstacles;
    double radius_cap;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t n : config.obstacle_counts) {
    for (double cap : config.radius_caps) {
      for (std::size_t k = 0; k < config.trials_per_cell; ++k) {
        jobs.push_back(Job{jobs.size(), n, cap, trial_seed(config.master_seed, n, cap, k)});
      }
    }
  }

  std::vector<std::unique_ptr<BarrierMethod>> methods;
  for (const std::string & m : config.methods) {
    methods.push_back(make_method(m));
  }

  const std::size_t n_methods = methods.size();
  std::vector<std::optional<TrialRecord>> slots(jobs.size() * n_methods);
  std::vector<std::optional<GenerationFailure>> failures(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) {
      const Job & job = jobs[j];
      ScenarioConfig sc = scenario_base;
      sc.n_obstacles = job.n_obstacles;
      sc.radius_cap = job.radius_cap;
      Scenario scenario;
      try {
        scenario = generate_scenario(sc, job.seed);
      } catch (const ScenarioGenerationError & e) {
        failures[j] = GenerationFailure{job.trial_id, job.n_obstacles, job.radius_cap, job.seed, e.what()};
        continue;
      }
      for (std::size_t m = 0; m < n_methods; ++m) {
        TrialRecord rec;
        rec.trial_id = job.trial_id;
        rec.method = config.methods[m];
        rec.n_obstacles = job.n_obstacles;
        rec.radius_cap = job.radius_cap;
        rec.seed = job.seed;
        rec.result = run_trial(scenario, *methods[m], settings);
        slots[j * n_methods + m] = std::move(rec);
      }
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(config.jobs, 1, std::max<std::size_t>(jobs.size(), 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) {
      pool.emplace_back(worker);
    }
  }

  ExperimentResult out;
  for (auto & s : slots) {
    if (s) {
      out.trials.push_back(std::move(*s));
    }
  }
  for (auto & f : failures) {
    if (f) {
      out.generation_failures.push_back(std::move(*f));
    }
  }
  out.table = aggregate(out.trials, out.generation_failures, config);
  return out;
}

}  // namespace dpcbf
