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

#ifndef DPCBF__TESTS__ORACLES_HPP_
#define DPCBF__TESTS__ORACLES_HPP_

// Reference implementations used only by tests. Each one is written from first principles
// and shares no code path with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "dpcbf/barriers.hpp"
#include "dpcbf/kinematics.hpp"
#include "dpcbf/qp.hpp"
#include "dpcbf/rng.hpp"
#include "dpcbf/validity.hpp"

namespace dpcbf::oracle
{

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- finite differences

struct JointState
{
  RobotState robot;
  ObstacleState obs;
};

/// Full state rate: bicycle with slip input, obstacle at constant velocity.
inline JointState joint_rate(const JointState & s, const ControlInput & u, double l_r)
{
  const double c = std::cos(s.robot.theta);
  const double sn = std::sin(s.robot.theta);
  JointState r;
  r.robot.x = s.robot.v * c - s.robot.v * u.beta * sn;
  r.robot.y = s.robot.v * sn + s.robot.v * u.beta * c;
  r.robot.theta = s.robot.v * u.beta / l_r;
  r.robot.v = u.a;
  r.obs.x = s.obs.v_obs * std::cos(s.obs.theta_obs);
  r.obs.y = s.obs.v_obs * std::sin(s.obs.theta_obs);
  r.obs.theta_obs = 0.0;
  r.obs.v_obs = 0.0;
  r.obs.radius = 0.0;
  return r;
}

inline JointState advance(const JointState & s, const JointState & rate, double eps)
{
  JointState o = s;
  o.robot.x += eps * rate.robot.x;
  o.robot.y += eps * rate.robot.y;
  o.robot.theta += eps * rate.robot.theta;  // no wrap: h is 2*pi periodic in theta
  o.robot.v += eps * rate.robot.v;
  o.obs.x += eps * rate.obs.x;
  o.obs.y += eps * rate.obs.y;
  return o;
}

/// Barrier value computed directly in world coordinates from its definition.
inline double dpcbf_h_world(const JointState & s, double r_rob, const DpcbfParams & k)
{
  const double px = s.obs.x - s.robot.x;
  const double py = s.obs.y - s.robot.y;
  const double vx = s.obs.v_obs * std::cos(s.obs.theta_obs) - s.robot.v * std::cos(s.robot.theta);
  const double vy = s.obs.v_obs * std::sin(s.obs.theta_obs) - s.robot.v * std::sin(s.robot.theta);
  const double p = std::hypot(px, py);
  const double r = r_rob + s.obs.radius;
  const double d = std::sqrt(p * p - r * r);
  // LoS components: along and across the unit vector to the obstacle.
  const double along = (px * vx + py * vy) / p;
  const double across = (px * vy - py * vx) / p;
  const double speed = std::max(std::hypot(vx, vy), kDefaultVrelFloor);
  return along + k.k_lambda * d / speed * across * across + k.k_mu * d;
}

/// Collision-cone barrier from its geometric definition: <p, v> + |p| |v| cos(phi) with
/// sin(phi) = r / |p|, the tangent half-angle of the inflated disc.
inline double c3bf_h_world(const JointState & s, double r_rob)
{
  const double px = s.obs.x - s.robot.x;
  const double py = s.obs.y - s.robot.y;
  const double vx = s.obs.v_obs * std::cos(s.obs.theta_obs) - s.robot.v * std::cos(s.robot.theta);
  const double vy = s.obs.v_obs * std::sin(s.obs.theta_obs) - s.robot.v * std::sin(s.robot.theta);
  const double p = std::hypot(px, py);
  const double r = r_rob + s.obs.radius;
  const double phi = std::asin(r / p);
  return px * vx + py * vy + p * std::hypot(vx, vy) * std::cos(phi);
}

template <typename H>
double fd_rate(const JointState & s, const ControlInput & u, double l_r, double eps, H h)
{
  const JointState rate = joint_rate(s, u, l_r);
  return (h(advance(s, rate, eps)) - h(advance(s, rate, -eps))) / (2.0 * eps);
}

/// Relative difference scaled by max(|a|, |b|, 1) so rates near zero compare absolutely.
inline double rel_err(double a, double b)
{
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

struct AdmissibleDraw
{
  JointState state;
  ControlInput u;
};

/// Random state with p in [s * r, sensing range], robot speed within limits, obstacle speed
/// up to 1.2 and |v_rel| >= v_rel_min (keeps the floor branch out of FD checks).
inline AdmissibleDraw draw_admissible(Rng & rng, const InputLimits & lim, double r_rob, double v_rel_min = 0.1)
{
  for (;;) {
    AdmissibleDraw d;
    d.state.robot = {uniform(rng, -10, 10), uniform(rng, -10, 10), uniform(rng, -kPi, kPi),
                     uniform(rng, lim.v_min, lim.v_max)};
    d.state.obs.radius = uniform(rng, 0.1, 0.7);
    const double r = r_rob + d.state.obs.radius;
    const double p = uniform(rng, lim.safety_buffer_s * r, lim.sensing_range);
    const double bearing = uniform(rng, -kPi, kPi);
    d.state.obs.x = d.state.robot.x + p * std::cos(bearing);
    d.state.obs.y = d.state.robot.y + p * std::sin(bearing);
    d.state.obs.theta_obs = uniform(rng, -kPi, kPi);
    d.state.obs.v_obs = uniform(rng, 0.0, 1.2);
    d.u = {uniform(rng, -lim.a_max, lim.a_max), uniform(rng, -lim.beta_max, lim.beta_max)};
    const Vec2 vrel = d.state.obs.velocity() - d.state.robot.velocity();
    if (norm(vrel) >= v_rel_min) {
      return d;
    }
  }
}

// ---------------------------------------------------------------- QP oracles

/// Exact feasibility of {box} ∩ {c_a a + c_b b >= rhs} by Fourier-Motzkin elimination of b.
inline bool fm_feasible(const QPProblem & q, double tol = 1e-12)
{
  struct Row
  {
    double ca, cb, rhs;
  };
  std::vector<Row> rows;
  for (const HalfPlane & h : q.rows) rows.push_back({h.c_a, h.c_beta, h.rhs});
  rows.push_back({0.0, 1.0, q.box.beta_lo});
  rows.push_back({0.0, -1.0, -q.box.beta_hi});

  // Constraints on `a` alone, as (coef, rhs) meaning coef * a >= rhs.
  std::vector<std::pair<double, double>> on_a;
  on_a.push_back({1.0, q.box.a_lo});
  on_a.push_back({-1.0, -q.box.a_hi});
  std::vector<Row> lower, upper;
  for (const Row & r : rows) {
    if (r.cb > 0.0) {
      lower.push_back(r);  // b >= (rhs - ca a) / cb
    } else if (r.cb < 0.0) {
      upper.push_back(r);  // b <= (rhs - ca a) / cb
    } else {
      on_a.push_back({r.ca, r.rhs});
    }
  }
  // Each lower/upper pair combined with weights (-u.cb, l.cb) > 0 cancels b.
  for (const Row & l : lower) {
    for (const Row & u : upper) {
      on_a.push_back({l.cb * u.ca - u.cb * l.ca, l.cb * u.rhs - u.cb * l.rhs});
    }
  }
  double a_lo = -std::numeric_limits<double>::infinity();
  double a_hi = std::numeric_limits<double>::infinity();
  for (const auto & [c, rhs] : on_a) {
    if (c > 0.0) {
      a_lo = std::max(a_lo, rhs / c);
    } else if (c < 0.0) {
      a_hi = std::min(a_hi, rhs / c);
    } else if (rhs > tol) {
      return false;
    }
  }
  return a_lo <= a_hi + tol;
}

inline double cost(const ControlInput & u, const ControlInput & ref)
{
  return (u.a - ref.a) * (u.a - ref.a) + (u.beta - ref.beta) * (u.beta - ref.beta);
}

struct GridBest
{
  std::optional<double> cost;
};

/// Best cost among feasible points of an n x n grid over the box.
inline GridBest grid_oracle(const QPProblem & q, std::size_t n = 401)
{
  GridBest best;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = q.box.a_lo + (q.box.a_hi - q.box.a_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double b =
        q.box.beta_lo + (q.box.beta_hi - q.box.beta_lo) * static_cast<double>(j) / static_cast<double>(n - 1);
      bool ok = true;
      for (const HalfPlane & h : q.rows) {
        if (h.c_a * a + h.c_beta * b < h.rhs) {
          ok = false;
          break;
        }
      }
      if (ok) {
        const double c = cost({a, b}, q.u_ref);
        if (!best.cost || c < *best.cost) best.cost = c;
      }
    }
  }
  return best;
}

/// Feasible polygon by Sutherland-Hodgman clipping of the box; exact minimiser by checking the
/// interior and projecting u_ref onto every edge.
inline std::optional<double> clip_oracle(const QPProblem & q)
{
  std::vector<Vec2> poly{{q.box.a_lo, q.box.beta_lo}, {q.box.a_hi, q.box.beta_lo},
                         {q.box.a_hi, q.box.beta_hi}, {q.box.a_lo, q.box.beta_hi}};
  for (const HalfPlane & h : q.rows) {
    std::vector<Vec2> next;
    auto val = [&](Vec2 p) { return h.c_a * p.x + h.c_beta * p.y - h.rhs; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 s = poly[i];
      const Vec2 e = poly[(i + 1) % poly.size()];
      const double vs = val(s);
      const double ve = val(e);
      if (vs >= 0.0) next.push_back(s);
      if ((vs >= 0.0) != (ve >= 0.0)) {
        const double t = vs / (vs - ve);
        next.push_back(s + t * (e - s));
      }
    }
    poly = std::move(next);
    if (poly.empty()) return std::nullopt;
  }
  const Vec2 r{q.u_ref.a, q.u_ref.beta};
  bool inside = true;
  for (const HalfPlane & h : q.rows) inside = inside && h.c_a * r.x + h.c_beta * r.y >= h.rhs;
  inside = inside && r.x >= q.box.a_lo && r.x <= q.box.a_hi && r.y >= q.box.beta_lo && r.y <= q.box.beta_hi;
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 s = poly[i];
    const Vec2 e = poly[(i + 1) % poly.size()];
    const Vec2 d = e - s;
    const double len2 = dot(d, d);
    const double t = len2 > 0.0 ? std::clamp(dot(r - s, d) / len2, 0.0, 1.0) : 0.0;
    const Vec2 p = s + t * d;
    best = std::min(best, dot(p - r, p - r));
  }
  return best;
}

inline QPProblem random_qp(Rng & rng, std::size_t max_rows = 20)
{
  QPProblem q;
  const double a_span = uniform(rng, 0.5, 10.0);
  const double b_span = uniform(rng, 0.05, 1.0);
  q.box.a_lo = uniform(rng, -a_span, 0.0);
  q.box.a_hi = q.box.a_lo + uniform(rng, 0.1, a_span);
  q.box.beta_lo = uniform(rng, -b_span, 0.0);
  q.box.beta_hi = q.box.beta_lo + uniform(rng, 0.02, b_span);
  q.u_ref = {uniform(rng, -1.5 * a_span, 1.5 * a_span), uniform(rng, -1.5 * b_span, 1.5 * b_span)};
  const auto n = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(max_rows) + 1.0));
  for (std::size_t i = 0; i < std::min(n, max_rows); ++i) {
    HalfPlane h;
    h.c_a = uniform(rng, -1.0, 1.0);
    h.c_beta = uniform(rng, -1.0, 1.0) * uniform(rng, 0.0, 20.0);
    // Offset around a random box point so a mix of feasible and infeasible instances appears.
    const double a0 = uniform(rng, q.box.a_lo, q.box.a_hi);
    const double b0 = uniform(rng, q.box.beta_lo, q.box.beta_hi);
    h.rhs = h.c_a * a0 + h.c_beta * b0 + uniform(rng, -0.5, 0.3) * (std::abs(h.c_a) * a_span + std::abs(h.c_beta) * b_span);
    q.rows.push_back(h);
  }
  return q;
}

// ---------------------------------------------------------------- validity by hand

/// Table-I bound constants written out by hand (r = 0.3 + 0.7, s = 1.05, sensing 15 m).
struct HandBounds
{
  double p_min = 1.05;
  double p_max = 15.0;
  double d_min = std::sqrt(1.05 * 1.05 - 1.0);  // sqrt(0.1025)
  double d_max = std::sqrt(15.0 * 15.0 - 1.0);  // sqrt(224)
  double vrel_max = 3.5 + 1.2;
  double v_min = 0.2;
  double v_max = 3.5;
  double v_obs_max = 1.2;
  double s_bar = 0.44;
  double l_r = 0.2;
  double a_max = 5.0;
  double beta_max = 0.28;
};

struct HandMargins
{
  double phi1, d1, phi2, d2;
};

inline HandMargins hand_margins(double kl, double km, const HandBounds & h)
{
  const double vrel_min = km * h.d_min;
  double cos_max = -vrel_min / h.vrel_max;
  cos_max = std::clamp(cos_max, -1.0, -std::numeric_limits<double>::min());
  const double sin2 = 1.0 - cos_max * cos_max;
  const double sin1 = std::sqrt(sin2);
  const double ratio = h.p_max / h.d_max;
  const double c = std::sqrt(1.0 - h.s_bar * h.s_bar);
  HandMargins m;
  m.phi1 = (km * ratio + h.v_min / h.l_r) * h.s_bar * h.beta_max;
  m.d1 = -c * (kl * ratio * h.vrel_max * sin2 + km * ratio);
  const double eta = kl * (h.d_max / vrel_min) * h.v_obs_max * sin2;
  m.phi2 = (c - h.s_bar * eta) * h.a_max;
  m.d2 = -h.v_max * (h.vrel_max / h.p_min * sin1 * h.s_bar + kl * ratio * h.vrel_max * sin2 +
                     kl * (h.d_min / h.p_min) * h.vrel_max * h.s_bar + km * ratio);
  return m;
}

// ---------------------------------------------------------------- control authority

/// Sup of |C^a| a_max + |C^b| b_max over the box, by dense grid (used to cross-check Phi).
inline double phi_grid_sup(const BarrierEval & e, const InputLimits & lim, std::size_t n = 101)
{
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -lim.a_max + 2.0 * lim.a_max * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double b = -lim.beta_max + 2.0 * lim.beta_max * static_cast<double>(j) / static_cast<double>(n - 1);
      best = std::max(best, e.c_a * a + e.c_beta * b);
    }
  }
  return best;
}

}  // namespace dpcbf::oracle

#endif  // DPCBF__TESTS__ORACLES_HPP_
