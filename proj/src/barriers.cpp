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

#include "dpcbf/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpcbf
{

namespace
{

void require_positive(double value, const char * field)
{
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(field) + " must be positive and finite");
  }
}

void require_non_negative(double value, const char * field)
{
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(field) + " must be non-negative and finite");
  }
}

// Chain rule through (vtil_x, vtil_y, |v_rel|, d) for the clamped |v_rel| < floor branch,
// where the divisor is constant.
BarrierEval dpcbf_rates_clamped(
  const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
  const DpcbfParams & k, double l_r, double v_eff)
{
  const double p = rel.p_norm;
  const double d = rel.d;
  const double vx = rel.vtil_x;
  const double vy = rel.vtil_y;
  const double dh_dvx = 1.0;
  const double dh_dvy = 2.0 * k.k_lambda * d * vy / v_eff;
  const double dh_dd = k.k_lambda * vy * vy / v_eff + k.k_mu;

  // Response of (vtil_x, vtil_y, d) to a LoS-frame position rate dp and velocity rate dw.
  auto response = [&](Vec2 dp, Vec2 dw) {
    const double alpha_dot = dp.y / p;
    const double dvx = dw.x + alpha_dot * vy;
    const double dvy = dw.y - alpha_dot * vx;
    const double dd = p * dp.x / d;
    return dh_dvx * dvx + dh_dvy * dvy + dh_dd * dd;
  };

  const double th = rel.theta_til;
  const double tho = rel.theta_obs_til;
  const double v = robot.v;
  const Vec2 e_th{std::cos(th), std::sin(th)};
  const Vec2 n_th{-std::sin(th), std::cos(th)};
  const Vec2 e_obs{std::cos(tho), std::sin(tho)};

  BarrierEval out;
  out.h = vx + k.k_lambda * d / v_eff * vy * vy + k.k_mu * d;
  out.lf_h_robot = response(-v * e_th, {});
  out.lf_h_obs = response(obs.v_obs * e_obs, {});
  out.lf_h = out.lf_h_robot + out.lf_h_obs;
  out.c_a = response({}, -1.0 * e_th);
  out.c_beta = response(-v * n_th, -(v * v / l_r) * n_th);
  return out;
}

}  // namespace

void DpcbfParams::validate() const
{
  require_positive(k_lambda, "dpcbf.k_lambda");
  require_positive(k_mu, "dpcbf.k_mu");
  require_positive(gamma, "dpcbf.gamma");
}

void InputLimits::validate() const
{
  require_non_negative(a_max, "limits.a_max");
  require_non_negative(beta_max, "limits.beta_max");
  require_positive(v_min, "limits.v_min");
  require_positive(v_max, "limits.v_max");
  require_positive(l_r, "limits.l_r");
  require_positive(sensing_range, "limits.sensing_range");
  if (!(v_min < v_max)) {
    throw std::invalid_argument("limits.v_min must be below limits.v_max");
  }
  if (!(safety_buffer_s > 1.0) || !std::isfinite(safety_buffer_s)) {
    throw std::invalid_argument("limits.safety_buffer_s must exceed 1");
  }
}

Clearance clearance(const RelativeKinematics & rel)
{
  if (rel.p_norm <= rel.r) {
    throw PenetrationError("clearance: obstacle penetrates the robot disc");
  }
  const double h_dist = (rel.p_norm - rel.r) * (rel.p_norm + rel.r);
  return {h_dist, std::sqrt(h_dist)};
}

double dpcbf_value(const RelativeKinematics & rel, const DpcbfParams & params, double vrel_floor)
{
  const double v_eff = std::max(rel.v_norm, vrel_floor);
  const double curvature = params.k_lambda * rel.d / v_eff;
  const double shift = params.k_mu * rel.d;
  return rel.vtil_x + curvature * rel.vtil_y * rel.vtil_y + shift;
}

BarrierEval dpcbf_gradients(
  const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
  const DpcbfParams & k, double l_r, double vrel_floor)
{
  if (rel.v_norm < vrel_floor) {
    return dpcbf_rates_clamped(rel, robot, obs, k, l_r, vrel_floor);
  }

  const double p = rel.p_norm;
  const double d = rel.d;
  const double vn = rel.v_norm;
  const double vx = rel.vtil_x;
  const double vy = rel.vtil_y;
  const double vy2 = vy * vy;
  const double v = robot.v;
  const double vo = obs.v_obs;
  const double cth = std::cos(rel.theta_til);
  const double sth = std::sin(rel.theta_til);
  const double cto = std::cos(rel.theta_obs_til);
  const double sto = std::sin(rel.theta_obs_til);

  const double kd1 = k.k_lambda * d / vn;            // curvature lambda(x)
  const double kd3 = k.k_lambda * d / (vn * vn * vn);
  const double p_over_d = p / d;

  BarrierEval out;
  out.h = vx + kd1 * vy2 + k.k_mu * d;

  out.c_a = (-1.0 + kd3 * vo * cto * vy2) * cth + (kd3 * vo * sto * vy2 - 2.0 * kd1 * vy) * sth -
            kd3 * v * vy2;

  const double steer_cos =
    -vy / p + 2.0 * kd1 * vy * vx / p + (v / l_r) * (kd3 * vo * sto * vy2 - 2.0 * kd1 * vy);
  const double steer_sin = (k.k_lambda * p_over_d * vy2 / vn + k.k_mu * p_over_d) +
                           (v / l_r) * (1.0 - kd3 * vo * cto * vy2);
  out.c_beta = v * (steer_cos * cth + steer_sin * sth);

  // Drift groups: the robot term uses (-v, theta_til), the obstacle term (+v_obs, theta_obs_til).
  const double radial = k.k_lambda * p_over_d * vy2 / vn + k.k_mu * p_over_d;
  const double lateral = 2.0 * k.k_lambda * (vy / vn) * (d / p) * vx - vy / p;
  out.lf_h_robot = v * (-radial * cth + lateral * sth);
  out.lf_h_obs = vo * (radial * cto - lateral * sto);
  out.lf_h = out.lf_h_robot + out.lf_h_obs;
  return out;
}

double c3bf_value(const RelativeKinematics & rel)
{
  if (rel.p_norm <= rel.r) {
    throw PenetrationError("c3bf_value: obstacle penetrates the robot disc");
  }
  return dot(rel.p_rel, rel.v_rel) + rel.v_norm * rel.d;
}

BarrierEval c3bf_gradients(
  const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
  double l_r, double vrel_floor)
{
  const double h = c3bf_value(rel);
  const Vec2 p = rel.p_rel;
  const Vec2 w = rel.v_rel;
  const double vn = rel.v_norm;
  const double v_eff = std::max(vn, vrel_floor);
  const double d = rel.d;
  const double v = robot.v;

  // dh = <dp, w> + <p, dw> + d <w, dw> / |w| + |w| <p, dp> / d
  auto response = [&](Vec2 dp, Vec2 dw) {
    return dot(dp, w) + dot(p, dw) + d * dot(w, dw) / v_eff + vn * dot(p, dp) / d;
  };

  const Vec2 e_th{std::cos(robot.theta), std::sin(robot.theta)};
  const Vec2 n_th{-std::sin(robot.theta), std::cos(robot.theta)};

  BarrierEval out;
  out.h = h;
  out.lf_h_robot = response(-v * e_th, {});
  out.lf_h_obs = response(obs.velocity(), {});
  out.lf_h = out.lf_h_robot + out.lf_h_obs;
  out.c_a = response({}, -1.0 * e_th);
  out.c_beta = response(-v * n_th, -(v * v / l_r) * n_th);
  return out;
}

double control_authority(const BarrierEval & eval, const InputLimits & limits)
{
  return std::abs(eval.c_a) * limits.a_max + std::abs(eval.c_beta) * limits.beta_max;
}

DpcbfMethod::DpcbfMethod(DpcbfParams params, double vrel_floor)
: params_(params), vrel_floor_(vrel_floor)
{
  params_.validate();
}

BarrierEval DpcbfMethod::evaluate(
  const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
  double l_r) const
{
  return dpcbf_gradients(rel, robot, obs, params_, l_r, vrel_floor_);
}

C3bfMethod::C3bfMethod(double gamma, double vrel_floor) : gamma_(gamma), vrel_floor_(vrel_floor)
{
  require_positive(gamma_, "c3bf.gamma");
}

BarrierEval C3bfMethod::evaluate(
  const RelativeKinematics & rel, const RobotState & robot, const ObstacleState & obs,
  double l_r) const
{
  return c3bf_gradients(rel, robot, obs, l_r, vrel_floor_);
}

std::unique_ptr<BarrierMethod> make_method(
  std::string_view name, const DpcbfParams & params, double c3bf_gamma, double vrel_floor)
{
  if (name == "dpcbf") {
    return std::make_unique<DpcbfMethod>(params, vrel_floor);
  }
  if (name == "c3bf") {
    return std::make_unique<C3bfMethod>(c3bf_gamma, vrel_floor);
  }
  throw std::invalid_argument("unknown barrier method: " + std::string(name));
}

}  // namespace dpcbf
