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

#ifndef DPCBF__KINEMATICS_HPP_
#define DPCBF__KINEMATICS_HPP_

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpcbf
{

/// Obstacle disc overlaps the inflated robot disc (‖p_rel‖ ≤ r).
class PenetrationError : public std::domain_error
{
public:
  explicit PenetrationError(const std::string & what) : std::domain_error(what) {}
};

/// Robot and obstacle centers coincide, so the line-of-sight angle is undefined.
class DegenerateLosError : public std::domain_error
{
public:
  explicit DegenerateLosError(const std::string & what) : std::domain_error(what) {}
};

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Kinematic bicycle state at the center of mass.
struct RobotState
{
  double x{0.0};      // [m]
  double y{0.0};      // [m]
  double theta{0.0};  // heading [rad], kept in (-pi, pi]
  double v{0.0};      // forward speed [m/s]

  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const { return {v * std::cos(theta), v * std::sin(theta)}; }
};

/// Constant-velocity disc obstacle.
struct ObstacleState
{
  double x{0.0};
  double y{0.0};
  double theta_obs{0.0};
  double v_obs{0.0};
  double radius{0.1};

  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const { return {v_obs * std::cos(theta_obs), v_obs * std::sin(theta_obs)}; }
};

/// Longitudinal acceleration and (small) slip angle.
struct ControlInput
{
  double a{0.0};     // [m/s^2]
  double beta{0.0};  // [rad]

  friend constexpr bool operator==(ControlInput, ControlInput) = default;
};

/// Relative geometry of one robot/obstacle pair, with line-of-sight (LoS) frame components.
///
/// The LoS frame is the world frame rotated by `alpha` so that its x-axis points from the
/// robot to the obstacle center.
struct RelativeKinematics
{
  Vec2 p_rel;          // obstacle position minus robot position [m]
  Vec2 v_rel;          // obstacle velocity minus robot velocity [m/s]
  double p_norm{0.0};
  double v_norm{0.0};
  double alpha{0.0};   // LoS angle [rad]
  double vtil_x{0.0};  // LoS-frame relative velocity [m/s]
  double vtil_y{0.0};
  double psi_til{0.0};        // angle of the LoS-frame relative velocity [rad]
  double theta_til{0.0};      // robot heading in the LoS frame [rad]
  double theta_obs_til{0.0};  // obstacle heading in the LoS frame [rad]
  double d{0.0};              // clearance sqrt(p_norm^2 - r^2) [m]
  double r{0.0};              // combined radius [m]
};

/// Wraps an angle into (-pi, pi]. Throws std::domain_error for non-finite input.
double wrap_angle(double theta);

/// One explicit-Euler step of the small-slip kinematic bicycle
///   x' = v cos(theta) - v beta sin(theta),  y' = v sin(theta) + v beta cos(theta),
///   theta' = v beta / l_r,                  v' = a.
RobotState bicycle_step(const RobotState & state, const ControlInput & u, double dt, double l_r);

/// Time derivative of the bicycle state under input `u` (the control-affine vector field).
RobotState bicycle_rate(const RobotState & state, const ControlInput & u, double l_r);

ObstacleState obstacle_step(const ObstacleState & obs, double dt);

/// Rotates `v` by -alpha, i.e. expresses a world-frame vector in the LoS frame.
inline Vec2 to_los(Vec2 v, double alpha)
{
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {c * v.x + s * v.y, -s * v.x + c * v.y};
}

inline Vec2 from_los(Vec2 v, double alpha) { return to_los(v, -alpha); }

/// LoS change of coordinates for a robot of radius `r_rob` against `obs`.
/// Throws DegenerateLosError when the centers coincide and PenetrationError when
/// p_norm <= r_rob + obs.radius.
RelativeKinematics relative_kinematics(
  const RobotState & robot, const ObstacleState & obs, double r_rob);

}  // namespace dpcbf

#endif  // DPCBF__KINEMATICS_HPP_
