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

#include "dpcbf/kinematics.hpp"

#include <numbers>

namespace dpcbf
{

double wrap_angle(double theta)
{
  if (!std::isfinite(theta)) {
    throw std::domain_error("wrap_angle: non-finite angle");
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (wrapped <= -std::numbers::pi) {
    wrapped += kTwoPi;
  }
  return wrapped;
}

RobotState bicycle_rate(const RobotState & s, const ControlInput & u, double l_r)
{
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  return {
    s.v * c - s.v * u.beta * sn,
    s.v * sn + s.v * u.beta * c,
    s.v * u.beta / l_r,
    u.a,
  };
}

RobotState bicycle_step(const RobotState & state, const ControlInput & u, double dt, double l_r)
{
  if (!(dt > 0.0) || !(l_r > 0.0)) {
    throw std::invalid_argument("bicycle_step: dt and l_r must be positive");
  }
  const RobotState rate = bicycle_rate(state, u, l_r);
  RobotState next{
    state.x + dt * rate.x,
    state.y + dt * rate.y,
    wrap_angle(state.theta + dt * rate.theta),
    state.v + dt * rate.v,
  };
  return next;
}

ObstacleState obstacle_step(const ObstacleState & obs, double dt)
{
  if (!(dt > 0.0)) {
    throw std::invalid_argument("obstacle_step: dt must be positive");
  }
  ObstacleState next = obs;
  next.x += obs.v_obs * std::cos(obs.theta_obs) * dt;
  next.y += obs.v_obs * std::sin(obs.theta_obs) * dt;
  return next;
}

RelativeKinematics relative_kinematics(
  const RobotState & robot, const ObstacleState & obs, double r_rob)
{
  RelativeKinematics rel;
  rel.p_rel = obs.position() - robot.position();
  rel.v_rel = obs.velocity() - robot.velocity();
  rel.p_norm = norm(rel.p_rel);
  rel.v_norm = norm(rel.v_rel);
  rel.r = r_rob + obs.radius;
  if (rel.p_norm == 0.0) {
    throw DegenerateLosError("relative_kinematics: robot and obstacle centers coincide");
  }
  if (rel.p_norm <= rel.r) {
    throw PenetrationError("relative_kinematics: obstacle penetrates the robot disc");
  }
  rel.alpha = std::atan2(rel.p_rel.y, rel.p_rel.x);
  const Vec2 vtil = to_los(rel.v_rel, rel.alpha);
  rel.vtil_x = vtil.x;
  rel.vtil_y = vtil.y;
  rel.psi_til = std::atan2(vtil.y, vtil.x);
  rel.theta_til = wrap_angle(robot.theta - rel.alpha);
  rel.theta_obs_til = wrap_angle(obs.theta_obs - rel.alpha);
  // (p - r)(p + r) loses less precision than p^2 - r^2 near the disc.
  rel.d = std::sqrt((rel.p_norm - rel.r) * (rel.p_norm + rel.r));
  return rel;
}

}  // namespace dpcbf
