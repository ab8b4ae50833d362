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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "dpcbf/kinematics.hpp"
#include "dpcbf/rng.hpp"

namespace dpcbf
{
namespace
{

constexpr double kPi = std::numbers::pi;

TEST(WrapAngle, Examples)
{
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_angle(3.0 * kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
}

TEST(WrapAngle, RejectsNonFinite)
{
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST(WrapAngle, RangeAndCongruence)
{
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double x = uniform(rng, -1000.0, 1000.0);
    const double w = wrap_angle(x);
    ASSERT_GT(w, -kPi);
    ASSERT_LE(w, kPi);
    const double k = (x - w) / (2.0 * kPi);
    ASSERT_NEAR(k, std::round(k), 1e-9);
  }
}

TEST(BicycleStep, Examples)
{
  const RobotState s0{0.0, 0.0, 0.0, 1.0};
  const RobotState a = bicycle_step(s0, {0.0, 0.0}, 1.0, 0.2);
  EXPECT_DOUBLE_EQ(a.x, 1.0);
  EXPECT_DOUBLE_EQ(a.y, 0.0);
  EXPECT_DOUBLE_EQ(a.theta, 0.0);
  EXPECT_DOUBLE_EQ(a.v, 1.0);

  EXPECT_DOUBLE_EQ(bicycle_step(s0, {1.0, 0.0}, 0.5, 0.2).v, 1.5);
  EXPECT_NEAR(bicycle_step(s0, {0.0, 0.2}, 0.1, 0.2).theta, 0.1, 1e-15);
}

TEST(BicycleStep, SlipDisplacesSideways)
{
  const RobotState s = bicycle_step({0.0, 0.0, 0.0, 2.0}, {0.0, 0.1}, 0.5, 0.2);
  EXPECT_DOUBLE_EQ(s.x, 1.0);
  EXPECT_DOUBLE_EQ(s.y, 0.1);  // v * beta * dt
}

TEST(BicycleStep, WrapsHeading)
{
  const RobotState s = bicycle_step({0.0, 0.0, kPi - 0.01, 1.0}, {0.0, 0.2}, 0.1, 0.2);
  EXPECT_NEAR(s.theta, -kPi + 0.09, 1e-12);
}

TEST(BicycleStep, RejectsBadArguments)
{
  EXPECT_THROW(bicycle_step({}, {}, 0.0, 0.2), std::invalid_argument);
  EXPECT_THROW(bicycle_step({}, {}, 0.1, 0.0), std::invalid_argument);
}

RobotState integrate(RobotState s, ControlInput u, double horizon, double dt)
{
  const auto n = static_cast<int>(std::llround(horizon / dt));
  for (int i = 0; i < n; ++i) s = bicycle_step(s, u, dt, 0.2);
  return s;
}

double state_error(const RobotState & a, const RobotState & b)
{
  return std::hypot(a.x - b.x, a.y - b.y) + std::abs(wrap_angle(a.theta - b.theta)) + std::abs(a.v - b.v);
}

TEST(BicycleStep, EulerIsFirstOrder)
{
  const RobotState s0{0.0, 0.0, 0.3, 1.5};
  const ControlInput u{0.8, 0.15};
  const RobotState ref = integrate(s0, u, 1.0, 1e-5);
  const double e1 = state_error(integrate(s0, u, 1.0, 0.02), ref);
  const double e2 = state_error(integrate(s0, u, 1.0, 0.01), ref);
  const double e3 = state_error(integrate(s0, u, 1.0, 0.005), ref);
  EXPECT_NEAR(e1 / e2, 2.0, 0.1);
  EXPECT_NEAR(e2 / e3, 2.0, 0.1);
}

TEST(ObstacleStep, Examples)
{
  const ObstacleState a = obstacle_step({0.0, 0.0, 0.0, 1.0, 0.4}, 2.0);
  EXPECT_DOUBLE_EQ(a.x, 2.0);
  EXPECT_DOUBLE_EQ(a.y, 0.0);
  EXPECT_DOUBLE_EQ(a.radius, 0.4);
  const ObstacleState b = obstacle_step({0.0, 0.0, kPi / 2, 1.0, 0.4}, 1.0);
  EXPECT_NEAR(b.x, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(b.y, 1.0);
  EXPECT_DOUBLE_EQ(b.theta_obs, kPi / 2);
  const ObstacleState c = obstacle_step({3.0, -1.0, 1.0, 0.0, 0.2}, 5.0);
  EXPECT_EQ(c.x, 3.0);
  EXPECT_EQ(c.y, -1.0);
}

TEST(RelativeKinematics, AlignedExample)
{
  const RelativeKinematics rel = relative_kinematics({0, 0, 0, 1}, {5, 0, 0, 0, 0.7}, 0.3);
  EXPECT_DOUBLE_EQ(rel.alpha, 0.0);
  EXPECT_DOUBLE_EQ(rel.vtil_x, -1.0);
  EXPECT_DOUBLE_EQ(rel.vtil_y, 0.0);
  EXPECT_DOUBLE_EQ(rel.psi_til, kPi);
  EXPECT_DOUBLE_EQ(rel.theta_til, 0.0);
  EXPECT_DOUBLE_EQ(rel.d, std::sqrt(24.0));
  EXPECT_DOUBLE_EQ(rel.r, 1.0);
}

TEST(RelativeKinematics, QuarterTurnExample)
{
  const RelativeKinematics rel = relative_kinematics({0, 0, 0, 1}, {0, 5, 0, 0, 0.7}, 0.3);
  EXPECT_DOUBLE_EQ(rel.alpha, kPi / 2);
  EXPECT_NEAR(rel.vtil_x, 0.0, 1e-15);
  EXPECT_NEAR(rel.vtil_y, 1.0, 1e-15);
}

TEST(RelativeKinematics, Errors)
{
  EXPECT_THROW(relative_kinematics({1, 1, 0, 1}, {1, 1, 0, 0, 0.5}, 0.3), DegenerateLosError);
  EXPECT_THROW(relative_kinematics({0, 0, 0, 1}, {0.8, 0, 0, 0, 0.5}, 0.3), PenetrationError);
  EXPECT_THROW(relative_kinematics({0, 0, 0, 1}, {0.8, 0, 0, 0, 0.5}, 0.3), std::domain_error);
}

struct RandomPair
{
  RobotState robot;
  ObstacleState obs;
};

RandomPair draw_pair(Rng & rng)
{
  RandomPair p;
  p.robot = {uniform(rng, -20, 20), uniform(rng, -20, 20), wrap_angle(uniform(rng, -kPi, kPi)),
             uniform(rng, 0.0, 3.5)};
  const double dist = uniform(rng, 1.1, 15.0);
  const double bearing = uniform(rng, -kPi, kPi);
  p.obs = {p.robot.x + dist * std::cos(bearing), p.robot.y + dist * std::sin(bearing),
           wrap_angle(uniform(rng, -kPi, kPi)), uniform(rng, 0.0, 1.2), 0.7};
  return p;
}

TEST(RelativeKinematics, Invariants)
{
  Rng rng(11);
  for (int i = 0; i < 5000; ++i) {
    const RandomPair s = draw_pair(rng);
    const RelativeKinematics rel = relative_kinematics(s.robot, s.obs, 0.3);
    const double vn = norm(rel.v_rel);
    ASSERT_LE(std::abs(std::hypot(rel.vtil_x, rel.vtil_y) - vn), 1e-9 * (1.0 + vn));
    ASSERT_NEAR(rel.vtil_x, rel.v_norm * std::cos(rel.psi_til), 1e-12 * (1.0 + vn));
    ASSERT_NEAR(rel.vtil_y, rel.v_norm * std::sin(rel.psi_til), 1e-12 * (1.0 + vn));
    ASSERT_NEAR(rel.d, std::sqrt(rel.p_norm * rel.p_norm - 1.0), 1e-12);
    const Vec2 back = from_los({rel.vtil_x, rel.vtil_y}, rel.alpha);
    ASSERT_NEAR(back.x, rel.v_rel.x, 1e-9);
    ASSERT_NEAR(back.y, rel.v_rel.y, 1e-9);
    ASSERT_GT(rel.theta_til, -kPi);
    ASSERT_LE(rel.theta_til, kPi);
  }
}

TEST(RelativeKinematics, RotationInvariance)
{
  Rng rng(13);
  for (int i = 0; i < 2000; ++i) {
    const RandomPair s = draw_pair(rng);
    const double phi = uniform(rng, -kPi, kPi);
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    auto rot = [&](double x, double y) { return Vec2{c * x - sn * y, sn * x + c * y}; };
    RandomPair t = s;
    const Vec2 rp = rot(s.robot.x, s.robot.y);
    const Vec2 op = rot(s.obs.x, s.obs.y);
    t.robot.x = rp.x;
    t.robot.y = rp.y;
    t.robot.theta = wrap_angle(s.robot.theta + phi);
    t.obs.x = op.x;
    t.obs.y = op.y;
    t.obs.theta_obs = wrap_angle(s.obs.theta_obs + phi);
    const RelativeKinematics a = relative_kinematics(s.robot, s.obs, 0.3);
    const RelativeKinematics b = relative_kinematics(t.robot, t.obs, 0.3);
    ASSERT_NEAR(a.vtil_x, b.vtil_x, 1e-9);
    ASSERT_NEAR(a.vtil_y, b.vtil_y, 1e-9);
    ASSERT_NEAR(a.d, b.d, 1e-9);
    ASSERT_NEAR(wrap_angle(a.theta_til - b.theta_til), 0.0, 1e-9);
    ASSERT_NEAR(wrap_angle(a.theta_obs_til - b.theta_obs_til), 0.0, 1e-9);
  }
}

TEST(RelativeKinematics, MirrorSymmetry)
{
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    RandomPair s = draw_pair(rng);
    // Put the configuration on the x axis so the LoS axis is the world x axis, then mirror y.
    s.obs.x = s.robot.x + std::hypot(s.obs.x - s.robot.x, s.obs.y - s.robot.y);
    s.obs.y = s.robot.y;
    RandomPair m = s;
    m.robot.theta = wrap_angle(-s.robot.theta);
    m.obs.theta_obs = wrap_angle(-s.obs.theta_obs);
    const RelativeKinematics a = relative_kinematics(s.robot, s.obs, 0.3);
    const RelativeKinematics b = relative_kinematics(m.robot, m.obs, 0.3);
    ASSERT_NEAR(a.vtil_x, b.vtil_x, 1e-12);
    ASSERT_NEAR(a.vtil_y, -b.vtil_y, 1e-12);
    ASSERT_NEAR(a.d, b.d, 1e-12);
    ASSERT_NEAR(wrap_angle(a.theta_til + b.theta_til), 0.0, 1e-12);
    ASSERT_NEAR(wrap_angle(a.theta_obs_til + b.theta_obs_til), 0.0, 1e-12);
    if (std::abs(a.vtil_y) > 1e-9) {
      ASSERT_NEAR(wrap_angle(a.psi_til + b.psi_til), 0.0, 1e-12);
    }
  }
}

}  // namespace
}  // namespace dpcbf
