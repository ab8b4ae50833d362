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

#include "dpcbf/validity.hpp"

#include <cmath>
#include <numbers>

namespace dpcbf
{

namespace
{

std::vector<double> log_space(double lo, double hi, std::size_t n)
{
  if (n == 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("region grid: need n >= 1 and 0 < min <= max");
  }
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace

BoundSet derive_bounds(
  const InputLimits & limits, double r, double k_mu, const BoundOptions & options)
{
  limits.validate();
  if (!(r > 0.0)) {
    throw std::invalid_argument("derive_bounds: combined radius must be positive");
  }
  if (!(options.s_bar >= 0.0 && options.s_bar < 1.0)) {
    throw InvalidBoundsError("derive_bounds: s_bar must lie in [0, 1)");
  }
  BoundSet b;
  b.r = r;
  b.p_min = limits.safety_buffer_s * r;
  b.p_max = limits.sensing_range;
  if (!(b.p_max > b.p_min)) {
    throw InvalidBoundsError("derive_bounds: sensing range must exceed s * r");
  }
  b.d_min = std::sqrt(b.p_min * b.p_min - r * r);
  b.d_max = std::sqrt(b.p_max * b.p_max - r * r);
  b.v_min = limits.v_min;
  b.v_max = limits.v_max;
  b.v_obs_max = options.v_obs_max;
  b.s_bar = options.s_bar;
  b.l_r = limits.l_r;
  b.a_max = limits.a_max;
  b.beta_max = limits.beta_max;
  switch (options.vrel_rule) {
    case VrelMaxRule::kSum:
      b.vrel_max = limits.v_max + options.v_obs_max;
      break;
    case VrelMaxRule::kRobotMax:
      b.vrel_max = limits.v_max;
      break;
    case VrelMaxRule::kExplicit:
      b.vrel_max = options.vrel_max;
      break;
  }
  if (!(b.vrel_max > 0.0)) {
    throw InvalidBoundsError("derive_bounds: vrel_max must be positive");
  }
  b.vrel_min = k_mu * b.d_min;
  b.cos_psi_max = -b.vrel_min / b.vrel_max;
  if (!(b.cos_psi_max >= -1.0 && b.cos_psi_max < 0.0)) {
    throw InvalidBoundsError("derive_bounds: k_mu * d_min must lie in (0, vrel_max]");
  }
  b.sin_psi_max = std::sqrt(1.0 - b.cos_psi_max * b.cos_psi_max);
  return b;
}

double boundary_speed(double d, double psi_til, double k_lambda, double k_mu)
{
  const double s = std::sin(psi_til);
  const double denom = -std::cos(psi_til) - k_lambda * d * s * s;
  if (!(denom > 0.0)) {
    throw NoBoundarySolutionError("boundary_speed: non-positive denominator");
  }
  return k_mu * d / denom;
}

CaseMargins case1_margins(double k_lambda, double k_mu, const BoundSet & b)
{
  const double pd = b.p_max / b.d_max;
  const double sin2 = b.sin_psi_max * b.sin_psi_max;
  CaseMargins m;
  m.phi_min = (k_mu * pd + b.v_min / b.l_r) * b.s_bar * b.beta_max;
  m.d_min = -std::sqrt(1.0 - b.s_bar * b.s_bar) * (k_lambda * pd * b.vrel_max * sin2 + k_mu * pd);
  return m;
}

CaseMargins case2_margins(double k_lambda, double k_mu, const BoundSet & b)
{
  const double pd = b.p_max / b.d_max;
  const double sin2 = b.sin_psi_max * b.sin_psi_max;
  const double eta_a_sin_max = k_lambda * (b.d_max / b.vrel_min) * b.v_obs_max * sin2;
  CaseMargins m;
  m.phi_min = (std::sqrt(1.0 - b.s_bar * b.s_bar) - b.s_bar * eta_a_sin_max) * b.a_max;
  m.d_min = -b.v_max * ((b.vrel_max / b.p_min) * b.sin_psi_max * b.s_bar +
                        k_lambda * pd * b.vrel_max * sin2 +
                        k_lambda * (b.d_min / b.p_min) * b.vrel_max * b.s_bar + k_mu * pd);
  return m;
}

MarginReport evaluate_margins(double k_lambda, double k_mu, const BoundSet & b)
{
  const CaseMargins c1 = case1_margins(k_lambda, k_mu, b);
  const CaseMargins c2 = case2_margins(k_lambda, k_mu, b);
  MarginReport r;
  r.phi1_min = c1.phi_min;
  r.d1_min = c1.d_min;
  r.phi2_min = c2.phi_min;
  r.d2_min = c2.d_min;
  r.case1_ok = c1.ok();
  r.case2_ok = c2.ok();
  r.feasible = r.case1_ok && r.case2_ok;
  return r;
}

std::vector<double> RegionGrid::k_lambda_values() const
{
  return log_space(k_lambda_min, k_lambda_max, n_k_lambda);
}

std::vector<double> RegionGrid::k_mu_values() const
{
  return log_space(k_mu_min, k_mu_max, n_k_mu);
}

FeasibilityGrid scan_region(const RegionGrid & grid, const BoundTemplate & tmpl)
{
  const std::vector<double> kls = grid.k_lambda_values();
  const std::vector<double> kms = grid.k_mu_values();
  FeasibilityGrid out;
  out.n_k_lambda = kls.size();
  out.n_k_mu = kms.size();
  out.cells.reserve(kls.size() * kms.size());
  for (double km : kms) {
    std::optional<BoundSet> b;
    try {
      b = derive_bounds(tmpl.limits, tmpl.r, km, tmpl.options);
    } catch (const InvalidBoundsError &) {
      b.reset();
    }
    for (double kl : kls) {
      RegionCell cell;
      cell.k_lambda = kl;
      cell.k_mu = km;
      if (b) {
        cell.margins = evaluate_margins(kl, km, *b);
      } else {
        cell.reason = CellReason::kInvalidBounds;
      }
      out.cells.push_back(cell);
    }
  }
  return out;
}

SampledBoundaryState sample_boundary_state(
  Rng & rng, const DpcbfParams & params, const BoundSet & b, std::size_t * attempts)
{
  constexpr double kPi = std::numbers::pi;
  const auto max_attempts = static_cast<std::size_t>(10.0 / kMinAcceptanceRate);
  // Boundary speeds satisfy |v_rel| >= k_mu * d, and |v_rel| <= v_max + v_obs_max is needed to
  // match the robot and obstacle speed limits, so larger p can never be accepted.
  const double v_cap = std::min(b.vrel_max, b.v_max + b.v_obs_max);
  const double d_cap = v_cap / params.k_mu;
  const double p_hi = std::min(b.p_max, std::sqrt(b.r * b.r + d_cap * d_cap));
  if (!(p_hi >= b.p_min)) {
    throw SamplerStarvedError("sample_boundary_state: no boundary state within the speed limits");
  }
  for (std::size_t i = 0; i < max_attempts; ++i) {
    if (attempts != nullptr) {
      ++*attempts;
    }
    const double p = uniform(rng, b.p_min, p_hi);
    const double psi = uniform(rng, 0.5 * kPi, 1.5 * kPi);

    const double d = std::sqrt((p - b.r) * (p + b.r));
    const double sp = std::sin(psi);
    const double cp = std::cos(psi);
    const double denom = -cp - params.k_lambda * d * sp * sp;
    if (!(cp < 0.0) || !(denom > 0.0)) {
      continue;
    }
    const double vrel = params.k_mu * d / denom;
    if (vrel < b.vrel_min || vrel > b.vrel_max) {
      continue;
    }
    const double v = uniform(rng, b.v_min, b.v_max);
    const double theta_til = uniform(rng, -0.5 * kPi, 0.5 * kPi);
    // Obstacle velocity that realizes this relative velocity.
    const Vec2 vtil{vrel * cp, vrel * sp};
    const Vec2 w = vtil + Vec2{v * std::cos(theta_til), v * std::sin(theta_til)};
    const double w_norm = norm(w);
    if (w_norm > b.v_obs_max || w.x > 0.0) {
      continue;
    }

    SampledBoundaryState s;
    s.robot = {0.0, 0.0, theta_til, v};
    const double theta_obs = w_norm > 0.0 ? std::atan2(w.y, w.x) : kPi;
    s.obstacle = {p, 0.0, wrap_angle(theta_obs), w_norm, b.r};
    s.rel = relative_kinematics(s.robot, s.obstacle, 0.0);
    return s;
  }
  throw SamplerStarvedError("sample_boundary_state: no boundary state accepted");
}

double nagumo_margin(
  const SampledBoundaryState & s, const DpcbfParams & params, const InputLimits & limits,
  DriftModel drift)
{
  const BarrierEval e = dpcbf_gradients(s.rel, s.robot, s.obstacle, params, limits.l_r);
  const double lf = drift == DriftModel::kRobot ? e.lf_h_robot : e.lf_h;
  return lf + control_authority(e, limits);
}

ViolationReport nagumo_scan(
  std::size_t n_samples, const DpcbfParams & params, const BoundSet & b,
  const InputLimits & limits, const NagumoOptions & options)
{
  ViolationReport report;
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  for (std::size_t k = 0; report.n < n_samples; ++k) {
    Rng rng(derive_seed({options.seed, k}));
    const std::size_t todo = std::min(batch, n_samples - report.n);
    std::size_t attempts = 0;
    for (std::size_t i = 0; i < todo; ++i) {
      const SampledBoundaryState s = sample_boundary_state(rng, params, b, &attempts);
      if (static_cast<double>(todo) < kMinAcceptanceRate * static_cast<double>(attempts)) {
        throw SamplerStarvedError("nagumo_scan: boundary acceptance rate below 1e-4");
      }
      const double margin = nagumo_margin(s, params, limits, options.drift);
      if (margin < -options.violation_tol) {
        ++report.n_violations;
      }
      if (!report.worst_state || margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_state = s;
      }
    }
    report.attempts += attempts;
    report.n += todo;
  }
  return report;
}

}  // namespace dpcbf
