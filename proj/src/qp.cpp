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

#include "dpcbf/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpcbf
{

namespace
{

// a * x + b * y >= c
struct Line
{
  double a;
  double b;
  double c;
};

double cost_of(const ControlInput & u, const ControlInput & ref)
{
  const double da = u.a - ref.a;
  const double db = u.beta - ref.beta;
  return da * da + db * db;
}

bool feasible(const ControlInput & u, const std::vector<Line> & lines)
{
  for (const Line & l : lines) {
    const double scale = std::max({1.0, std::abs(l.c), std::abs(l.a * u.a), std::abs(l.b * u.beta)});
    if (l.a * u.a + l.b * u.beta - l.c < -kQpFeasibilityTol * scale) {
      return false;
    }
  }
  return true;
}

}  // namespace

ControlInput InputBox::clamp(const ControlInput & u) const
{
  return {std::clamp(u.a, a_lo, a_hi), std::clamp(u.beta, beta_lo, beta_hi)};
}

bool InputBox::contains(const ControlInput & u, double tol) const
{
  return u.a >= a_lo - tol && u.a <= a_hi + tol && u.beta >= beta_lo - tol &&
         u.beta <= beta_hi + tol;
}

QPResult solve(const QPProblem & problem)
{
  const InputBox & box = problem.box;
  if (!(box.a_lo <= box.a_hi) || !(box.beta_lo <= box.beta_hi)) {
    return Infeasible{};
  }

  std::vector<Line> lines;
  lines.reserve(problem.rows.size() + 4);
  lines.push_back({1.0, 0.0, box.a_lo});
  lines.push_back({-1.0, 0.0, -box.a_hi});
  lines.push_back({0.0, 1.0, box.beta_lo});
  lines.push_back({0.0, -1.0, -box.beta_hi});
  for (const HalfPlane & row : problem.rows) {
    const double n2 = row.c_a * row.c_a + row.c_beta * row.c_beta;
    if (n2 == 0.0) {
      if (row.rhs > 0.0) {
        return Infeasible{};
      }
      continue;  // 0 >= rhs holds everywhere
    }
    // Normalize so tolerances are comparable across rows.
    const double n = std::sqrt(n2);
    lines.push_back({row.c_a / n, row.c_beta / n, row.rhs / n});
  }

  const ControlInput ref = problem.u_ref;
  if (feasible(ref, lines)) {
    return Optimal{ref, 0.0};
  }

  std::optional<Optimal> best;
  auto consider = [&](const ControlInput & u) {
    if (!std::isfinite(u.a) || !std::isfinite(u.beta) || !feasible(u, lines)) {
      return;
    }
    const double c = cost_of(u, ref);
    if (!best || c < best->cost) {
      best = Optimal{u, c};
    }
  };

  // Projection of u_ref onto each line (unit normals).
  for (const Line & l : lines) {
    const double viol = l.c - (l.a * ref.a + l.b * ref.beta);
    consider({ref.a + viol * l.a, ref.beta + viol * l.b});
  }

  // Pairwise vertices.
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const Line & l1 = lines[i];
      const Line & l2 = lines[j];
      const double det = l1.a * l2.b - l1.b * l2.a;
      if (std::abs(det) < 1e-14) {
        continue;  // parallel; covered by the projections
      }
      consider({(l1.c * l2.b - l1.b * l2.c) / det, (l1.a * l2.c - l1.c * l2.a) / det});
    }
  }

  if (!best) {
    return Infeasible{};
  }
  return *best;
}

InputBox input_box(const RobotState & robot, const InputLimits & limits, double dt)
{
  InputBox box;
  box.beta_lo = -limits.beta_max;
  box.beta_hi = limits.beta_max;
  box.a_lo = std::max(-limits.a_max, (limits.v_min - robot.v) / dt);
  box.a_hi = std::min(limits.a_max, (limits.v_max - robot.v) / dt);
  if (box.a_lo > box.a_hi) {
    // Speed already outside the envelope: push back toward it as hard as allowed.
    if (robot.v < limits.v_min) {
      box.a_lo = box.a_hi = limits.a_max;
    } else {
      box.a_lo = box.a_hi = -limits.a_max;
    }
  }
  return box;
}

ConstraintSet build_constraints(
  const RobotState & robot, std::span<const ObstacleState> obstacles, const ControlInput & u_ref,
  const BarrierMethod & method, const InputLimits & limits, double r_rob, double dt)
{
  ConstraintSet out;
  out.problem.box = input_box(robot, limits, dt);
  out.problem.u_ref = out.problem.box.clamp(u_ref);
  out.problem.rows.reserve(obstacles.size());
  out.evals.reserve(obstacles.size());
  for (const ObstacleState & obs : obstacles) {
    const RelativeKinematics rel = relative_kinematics(robot, obs, r_rob);
    const BarrierEval eval = method.evaluate(rel, robot, obs, limits.l_r);
    // lf_h + c . u >= -gamma h
    out.problem.rows.push_back({eval.c_a, eval.c_beta, -method.gamma() * eval.h - eval.lf_h});
    out.evals.push_back(eval);
  }
  return out;
}

FilterResult safety_filter(
  const RobotState & robot, std::span<const ObstacleState> obstacles, const ControlInput & u_ref,
  const BarrierMethod & method, const InputLimits & limits, double r_rob, double dt)
{
  FilterResult out;
  std::vector<ObstacleState> in_range;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const ObstacleState & obs = obstacles[i];
    const double dist = norm(obs.position() - robot.position());
    if (dist <= r_rob + obs.radius) {
      out.status = FilterStatus::kCollision;
      out.collided = i;
      return out;
    }
    if (dist <= limits.sensing_range) {
      in_range.push_back(obs);
      out.in_range.push_back(i);
    }
  }

  ConstraintSet cs = build_constraints(robot, in_range, u_ref, method, limits, r_rob, dt);
  out.evals = std::move(cs.evals);
  out.qp = solve(cs.problem);
  out.status = is_optimal(out.qp) ? FilterStatus::kOptimal : FilterStatus::kInfeasible;
  return out;
}

}  // namespace dpcbf
