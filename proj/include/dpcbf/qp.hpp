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

#ifndef DPCBF__QP_HPP_
#define DPCBF__QP_HPP_

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dpcbf/barriers.hpp"
#include "dpcbf/kinematics.hpp"

namespace dpcbf
{

/// Linear inequality c_a * a + c_beta * beta >= rhs.
struct HalfPlane
{
  double c_a{0.0};
  double c_beta{0.0};
  double rhs{0.0};

  double slack(const ControlInput & u) const { return c_a * u.a + c_beta * u.beta - rhs; }
};

struct InputBox
{
  double a_lo{0.0};
  double a_hi{0.0};
  double beta_lo{0.0};
  double beta_hi{0.0};

  ControlInput clamp(const ControlInput & u) const;
  bool contains(const ControlInput & u, double tol = 0.0) const;
};

/// minimize |u - u_ref|^2 subject to the box and every row.
struct QPProblem
{
  ControlInput u_ref;
  InputBox box;
  std::vector<HalfPlane> rows;
};

struct Optimal
{
  ControlInput u;
  double cost{0.0};
};

struct Infeasible
{
};

using QPResult = std::variant<Optimal, Infeasible>;

inline bool is_optimal(const QPResult & r) { return std::holds_alternative<Optimal>(r); }

/// Feasibility tolerance used by the solver when accepting candidate points.
inline constexpr double kQpFeasibilityTol = 1e-10;

/// Exact minimizer of the strictly convex 2-D problem by candidate enumeration: the reference
/// point, the projection onto every constraint line and every pairwise line intersection.
/// Returns Infeasible when the polygon (box intersected with all rows) is empty.
QPResult solve(const QPProblem & problem);

/// Box from the input limits, tightened so that one Euler step keeps v in [v_min, v_max].
InputBox input_box(const RobotState & robot, const InputLimits & limits, double dt);

/// One CBF row per obstacle plus the input box; the reference is clamped into the box first.
/// Throws PenetrationError on any overlap.
struct ConstraintSet
{
  QPProblem problem;
  std::vector<BarrierEval> evals;
};

ConstraintSet build_constraints(
  const RobotState & robot, std::span<const ObstacleState> obstacles, const ControlInput & u_ref,
  const BarrierMethod & method, const InputLimits & limits, double r_rob, double dt);

enum class FilterStatus
{
  kOptimal,
  kInfeasible,
  kCollision,
};

struct FilterResult
{
  FilterStatus status{FilterStatus::kOptimal};
  QPResult qp{Infeasible{}};
  std::vector<BarrierEval> evals;        // per obstacle in sensing range
  std::vector<std::size_t> in_range;     // indices into the input obstacle list
  std::optional<std::size_t> collided;   // index of the first penetrating obstacle
};

/// Restricts to obstacles within sensing range, builds the CBF-QP and solves it.
FilterResult safety_filter(
  const RobotState & robot, std::span<const ObstacleState> obstacles, const ControlInput & u_ref,
  const BarrierMethod & method, const InputLimits & limits, double r_rob, double dt);

}  // namespace dpcbf

#endif  // DPCBF__QP_HPP_
