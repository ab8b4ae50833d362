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

#ifndef DPCBF__VALIDITY_HPP_
#define DPCBF__VALIDITY_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpcbf/barriers.hpp"
#include "dpcbf/kinematics.hpp"
#include "dpcbf/rng.hpp"

namespace dpcbf
{

class InvalidBoundsError : public std::domain_error
{
public:
  explicit InvalidBoundsError(const std::string & what) : std::domain_error(what) {}
};

class NoBoundarySolutionError : public std::domain_error
{
public:
  explicit NoBoundarySolutionError(const std::string & what) : std::domain_error(what) {}
};

class SamplerStarvedError : public std::runtime_error
{
public:
  explicit SamplerStarvedError(const std::string & what) : std::runtime_error(what) {}
};

/// How the worst-case relative speed is obtained from the limits.
enum class VrelMaxRule
{
  kSum,        // v_max + v_obs_max
  kRobotMax,   // v_max
  kExplicit,   // BoundOptions::vrel_max
};

struct BoundOptions
{
  double v_obs_max{1.2};
  double s_bar{0.44};
  VrelMaxRule vrel_rule{VrelMaxRule::kSum};
  double vrel_max{4.7};  // used only with kExplicit
};

/// Worst-case constants over the safety boundary for one (limits, r, k_mu) choice.
struct BoundSet
{
  double p_min{0.0};
  double p_max{0.0};
  double d_min{0.0};
  double d_max{0.0};
  double vrel_min{0.0};
  double vrel_max{0.0};
  double v_min{0.0};
  double v_max{0.0};
  double v_obs_max{0.0};
  double s_bar{0.0};
  double cos_psi_max{0.0};
  double sin_psi_max{0.0};
  double l_r{0.0};
  double a_max{0.0};
  double beta_max{0.0};
  double r{0.0};
};

/// p_min = s r, p_max = sensing range, d = sqrt(p^2 - r^2), cos(psi_max) = -k_mu d_min / vrel_max,
/// vrel_min = k_mu d_min. Throws InvalidBoundsError when cos(psi_max) leaves [-1, 0).
BoundSet derive_bounds(
  const InputLimits & limits, double r, double k_mu, const BoundOptions & options = {});

/// Relative speed placing the state on the boundary for clearance d and LoS angle psi_til.
/// Throws NoBoundarySolutionError when -cos(psi) - k_lambda d sin^2(psi) <= 0.
double boundary_speed(double d, double psi_til, double k_lambda, double k_mu);

struct CaseMargins
{
  double phi_min{0.0};
  double d_min{0.0};

  bool ok() const { return phi_min + d_min >= 0.0; }
};

/// Steering-dominant partition, normalized by v.
CaseMargins case1_margins(double k_lambda, double k_mu, const BoundSet & b);

/// Longitudinal-dominant partition.
CaseMargins case2_margins(double k_lambda, double k_mu, const BoundSet & b);

struct MarginReport
{
  double phi1_min{0.0};
  double d1_min{0.0};
  double phi2_min{0.0};
  double d2_min{0.0};
  bool case1_ok{false};
  bool case2_ok{false};
  bool feasible{false};
};

MarginReport evaluate_margins(double k_lambda, double k_mu, const BoundSet & b);

/// Log-spaced (k_lambda, k_mu) grid. A dimension with n == 1 uses its min value.
struct RegionGrid
{
  double k_lambda_min{1e-3};
  double k_lambda_max{10.0};
  std::size_t n_k_lambda{200};
  double k_mu_min{1e-3};
  double k_mu_max{10.0};
  std::size_t n_k_mu{200};

  std::vector<double> k_lambda_values() const;
  std::vector<double> k_mu_values() const;
};

enum class CellReason
{
  kOk,
  kInvalidBounds,
};

struct RegionCell
{
  double k_lambda{0.0};
  double k_mu{0.0};
  MarginReport margins;
  CellReason reason{CellReason::kOk};
};

/// Row-major over k_mu (outer) and k_lambda (inner).
struct FeasibilityGrid
{
  std::size_t n_k_lambda{0};
  std::size_t n_k_mu{0};
  std::vector<RegionCell> cells;

  const RegionCell & at(std::size_t i_lambda, std::size_t i_mu) const
  {
    return cells[i_mu * n_k_lambda + i_lambda];
  }
};

/// Inputs from which each cell rebuilds its k_mu-dependent bounds.
struct BoundTemplate
{
  InputLimits limits;
  double r{1.0};
  BoundOptions options;
};

FeasibilityGrid scan_region(const RegionGrid & grid, const BoundTemplate & tmpl);

/// A world-frame robot/obstacle pair lying on the zero level set of the DPCBF inside the
/// critical-heading set. The robot sits at the origin with the obstacle on the +x axis, so the
/// LoS angle is zero. The combined radius is carried entirely by the obstacle disc.
struct SampledBoundaryState
{
  RobotState robot;
  ObstacleState obstacle;
  RelativeKinematics rel;
};

inline constexpr double kMinAcceptanceRate = 1e-4;

/// Rejection sampler over the DPCBF boundary. Throws SamplerStarvedError after
/// 10 / kMinAcceptanceRate consecutive rejections. `attempts`, when given, accumulates the
/// number of proposals drawn.
SampledBoundaryState sample_boundary_state(
  Rng & rng, const DpcbfParams & params, const BoundSet & b, std::size_t * attempts = nullptr);

/// Which drift enters the pointwise boundary condition.
enum class DriftModel
{
  kRobot,  // robot-state Lie derivative, obstacle treated as frozen
  kTotal,  // full derivative along robot and obstacle motion
};

struct NagumoOptions
{
  std::uint64_t seed{1};
  DriftModel drift{DriftModel::kRobot};
  std::size_t batch_size{10000};
  double violation_tol{1e-9};
};

struct ViolationReport
{
  std::size_t n{0};
  std::size_t n_violations{0};
  std::size_t attempts{0};
  double worst_margin{0.0};
  std::optional<SampledBoundaryState> worst_state;
};

/// Margin of the input-constrained boundary condition at one state:
/// drift + |C^a| a_max + |C^beta| beta_max.
double nagumo_margin(
  const SampledBoundaryState & s, const DpcbfParams & params, const InputLimits & limits,
  DriftModel drift);

/// Evaluates nagumo_margin on n accepted boundary samples. Batch k draws from the stream
/// derive_seed({seed, k}), so results do not depend on evaluation order.
ViolationReport nagumo_scan(
  std::size_t n_samples, const DpcbfParams & params, const BoundSet & b,
  const InputLimits & limits, const NagumoOptions & options = {});

}  // namespace dpcbf

#endif  // DPCBF__VALIDITY_HPP_
