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

#ifndef DPCBF__BARRIERS_HPP_
#define DPCBF__BARRIERS_HPP_

#include <memory>
#include <string>
#include <string_view>

#include "dpcbf/kinematics.hpp"

namespace dpcbf
{

inline constexpr double kDefaultVrelFloor = 1e-6;

/// Gains of the dynamic parabolic barrier. The class-K function is alpha(h) = gamma * h.
struct DpcbfParams
{
  double k_lambda{0.144};
  double k_mu{0.505};
  double gamma{1.0};

  void validate() const;
};

/// Input box, speed envelope and sensing/clearance assumptions of the robot.
struct InputLimits
{
  double a_max{5.0};
  double beta_max{0.28};
  double v_min{0.2};
  double v_max{3.5};
  double l_r{0.2};
  double sensing_range{15.0};
  double safety_buffer_s{1.05};

  void validate() const;
};

/// Barrier value and its time-derivative decomposition h_dot = lf_h + c_a * a + c_beta * beta.
///
/// `lf_h` is the full drift along the joint robot/obstacle flow. It splits into
/// `lf_h_robot` (robot drift with the obstacle frozen) and `lf_h_obs` (obstacle motion with the
/// robot frozen).
struct BarrierEval
{
  double h{0.0};
  double lf_h{0.0};
  double lf_h_robot{0.0};
  double lf_h_obs{0.0};
  double c_a{0.0};
  double c_beta{0.0};

  double rate(const ControlInput & u) const { return lf_h + c_a * u.a + c_beta * u.beta; }
};

struct Clearance
{
  double h_dist{0.0};
  double d{0.0};
};

/// Squared-distance barrier and the tangent clearance. Throws PenetrationError inside the disc.
Clearance clearance(const RelativeKinematics & rel);

/// h = vtil_x + k_lambda * d / max(|v_rel|, floor) * vtil_y^2 + k_mu * d.
double dpcbf_value(
  const RelativeKinematics & rel, const DpcbfParams & params,
  double vrel_floor = kDefaultVrelFloor);

BarrierEval dpcbf_gradients(
  const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
  const DpcbfParams & params, double l_r, double vrel_floor = kDefaultVrelFloor);

/// Collision-cone barrier h_cc = <p_rel, v_rel> + |v_rel| * d.
double c3bf_value(const RelativeKinematics & rel);

BarrierEval c3bf_gradients(
  const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
  double l_r, double vrel_floor = kDefaultVrelFloor);

/// Largest input contribution to h_dot over the symmetric input box.
double control_authority(const BarrierEval & eval, const InputLimits & limits);

/// One barrier family usable as a CBF-QP constraint generator.
///
/// Additional collision-avoidance barriers plug into the filter and the experiment runner by
/// implementing this interface.
class BarrierMethod
{
public:
  virtual ~BarrierMethod() = default;
  virtual std::string_view name() const = 0;
  virtual double gamma() const = 0;
  virtual BarrierEval evaluate(
    const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
    double l_r) const = 0;
};

class DpcbfMethod final : public BarrierMethod
{
public:
  explicit DpcbfMethod(DpcbfParams params, double vrel_floor = kDefaultVrelFloor);
  std::string_view name() const override { return "dpcbf"; }
  double gamma() const override { return params_.gamma; }
  BarrierEval evaluate(
    const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
    double l_r) const override;

private:
  DpcbfParams params_;
  double vrel_floor_;
};

class C3bfMethod final : public BarrierMethod
{
public:
  explicit C3bfMethod(double gamma = 1.0, double vrel_floor = kDefaultVrelFloor);
  std::string_view name() const override { return "c3bf"; }
  double gamma() const override { return gamma_; }
  BarrierEval evaluate(
    const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
    double l_r) const override;

private:
  double gamma_;
  double vrel_floor_;
};

/// Builds a method by name ("dpcbf" or "c3bf"). Throws std::invalid_argument otherwise.
std::unique_ptr<BarrierMethod> make_method(
  std::string_view name, const DpcbfParams & params, double c3bf_gamma,
  double vrel_floor = kDefaultVrelFloor);

}  // namespace dpcbf

#endif  // DPCBF__BARRIERS_HPP_
