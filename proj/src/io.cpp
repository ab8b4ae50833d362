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

#include "dpcbf/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <regex>
#include <sstream>

#include <fmt/format.h>

namespace dpcbf
{

using nlohmann::json;

namespace
{

constexpr const char * kTrialsHeader =
  "trial_id,method,n_obstacles,radius_cap,seed,status,t_end,qp_cost_total,min_clearance";
constexpr const char * kTrajectoryHeader = "t,x,y,theta,v,a,beta,min_h";
constexpr const char * kRegionHeader =
  "k_lambda,k_mu,phi1_min,d1_min,phi2_min,d2_min,case1_ok,case2_ok,feasible";

std::vector<std::string> split(const std::string & line, char sep)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == sep) {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string & s, const char * what)
{
  errno = 0;
  char * end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError(std::string(what) + ": bad number '" + s + "'");
  }
  return x;
}

std::uint64_t parse_u64(const std::string & s, const char * what)
{
  errno = 0;
  char * end = nullptr;
  const unsigned long long x = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError(std::string(what) + ": bad integer '" + s + "'");
  }
  return x;
}

bool parse_bool01(const std::string & s, const char * what)
{
  if (s == "1") return true;
  if (s == "0") return false;
  throw ParseError(std::string(what) + ": expected 0 or 1, got '" + s + "'");
}

/// Reads rows after checking the header; strips a trailing CR so files edited on Windows parse.
template <typename Row>
void read_rows(std::istream & in, const char * header, std::size_t n_fields, Row row)
{
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty CSV");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw ParseError("unexpected CSV header '" + line + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != n_fields) {
      throw ParseError(fmt::format("line {}: expected {} fields, got {}", lineno, n_fields, f.size()));
    }
    row(f);
  }
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double num_or_inf(const json & j)
{
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json robot_json(const RobotState & r) { return {{"x", r.x}, {"y", r.y}, {"theta", r.theta}, {"v", r.v}}; }

RobotState robot_from(const json & j)
{
  return RobotState{j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>(),
                    j.at("v").get<double>()};
}

json obstacle_json(const ObstacleState & o)
{
  return {{"x", o.x}, {"y", o.y}, {"theta_obs", o.theta_obs}, {"v_obs", o.v_obs}, {"radius", o.radius}};
}

ObstacleState obstacle_from(const json & j)
{
  ObstacleState o;
  o.x = j.at("x").get<double>();
  o.y = j.at("y").get<double>();
  o.theta_obs = j.value("theta_obs", 0.0);
  o.v_obs = j.value("v_obs", 0.0);
  o.radius = j.at("radius").get<double>();
  return o;
}

/// Maps world coordinates onto an SVG canvas (y up).
struct Frame
{
  double x0, x1, y0, y1;
  double left, top, width, height;

  double sx(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double sy(double y) const { return top + (1.0 - (y - y0) / (y1 - y0)) * height; }
};

std::string f3(double x) { return fmt::format("{:.3f}", x); }

}  // namespace

std::string format_double(double x)
{
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

void write_trials_csv(std::ostream & out, const std::vector<TrialRecord> & trials)
{
  out << kTrialsHeader << '\n';
  for (const TrialRecord & t : trials) {
    out << t.trial_id << ',' << t.method << ',' << t.n_obstacles << ',' << format_double(t.radius_cap)
        << ',' << t.seed << ',' << to_string(t.result.status) << ',' << format_double(t.result.t_end)
        << ',' << format_double(t.result.qp_cost_total) << ',' << format_double(t.result.min_clearance)
        << '\n';
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream & in)
{
  std::vector<TrialRecord> out;
  read_rows(in, kTrialsHeader, 9, [&](const std::vector<std::string> & f) {
    TrialRecord t;
    t.trial_id = parse_u64(f[0], "trial_id");
    t.method = f[1];
    t.n_obstacles = parse_u64(f[2], "n_obstacles");
    t.radius_cap = parse_double(f[3], "radius_cap");
    t.seed = parse_u64(f[4], "seed");
    try {
      t.result.status = parse_status(f[5]);
    } catch (const std::invalid_argument & e) {
      throw ParseError(e.what());
    }
    t.result.t_end = parse_double(f[6], "t_end");
    t.result.qp_cost_total = parse_double(f[7], "qp_cost_total");
    t.result.min_clearance = parse_double(f[8], "min_clearance");
    out.push_back(std::move(t));
  });
  return out;
}

json summary_to_json(const ExperimentResult & result)
{
  json cells = json::array();
  for (const MetricsCell & c : result.table) {
    cells.push_back({
      {"method", c.method},
      {"n_obstacles", c.n_obstacles},
      {"radius_cap", c.radius_cap},
      {"trials", c.trials},
      {"generation_failures", c.generation_failures},
      {"success_rate", c.success_rate},
      {"infeasible_rate", c.infeasible_rate},
      {"collision_rate", c.collision_rate},
      {"timeout_rate", c.timeout_rate},
      {"mean_qp_cost", num(c.mean_qp_cost)},
      {"median_qp_cost", num(c.median_qp_cost)},
    });
  }
  json failures = json::array();
  for (const GenerationFailure & f : result.generation_failures) {
    failures.push_back({{"trial_id", f.trial_id}, {"n_obstacles", f.n_obstacles},
                        {"radius_cap", f.radius_cap}, {"seed", f.seed}, {"message", f.message}});
  }
  return {{"cells", cells}, {"generation_failures", failures}};
}

void write_summary_json(std::ostream & out, const ExperimentResult & result)
{
  out << summary_to_json(result).dump(2) << '\n';
}

MetricsTable read_summary_json(std::istream & in)
{
  MetricsTable table;
  try {
    const json doc = json::parse(in);
    for (const json & c : doc.at("cells")) {
      MetricsCell m;
      m.method = c.at("method").get<std::string>();
      m.n_obstacles = c.at("n_obstacles").get<std::size_t>();
      m.radius_cap = c.at("radius_cap").get<double>();
      m.trials = c.at("trials").get<std::size_t>();
      m.generation_failures = c.at("generation_failures").get<std::size_t>();
      m.success_rate = c.at("success_rate").get<double>();
      m.infeasible_rate = c.at("infeasible_rate").get<double>();
      m.collision_rate = c.at("collision_rate").get<double>();
      m.timeout_rate = c.at("timeout_rate").get<double>();
      m.mean_qp_cost = num_or_inf(c.at("mean_qp_cost"));
      m.median_qp_cost = num_or_inf(c.at("median_qp_cost"));
      table.push_back(std::move(m));
    }
  } catch (const json::exception & e) {
    throw ParseError(std::string("summary JSON: ") + e.what());
  }
  return table;
}

void write_trajectory_csv(std::ostream & out, const std::vector<TrajectorySample> & samples)
{
  out << kTrajectoryHeader << '\n';
  for (const TrajectorySample & s : samples) {
    out << format_double(s.t) << ',' << format_double(s.robot.x) << ',' << format_double(s.robot.y)
        << ',' << format_double(s.robot.theta) << ',' << format_double(s.robot.v) << ','
        << format_double(s.u.a) << ',' << format_double(s.u.beta) << ',' << format_double(s.min_h)
        << '\n';
  }
}

std::vector<TrajectorySample> read_trajectory_csv(std::istream & in)
{
  std::vector<TrajectorySample> out;
  read_rows(in, kTrajectoryHeader, 8, [&](const std::vector<std::string> & f) {
    TrajectorySample s;
    s.t = parse_double(f[0], "t");
    s.robot = RobotState{parse_double(f[1], "x"), parse_double(f[2], "y"), parse_double(f[3], "theta"),
                         parse_double(f[4], "v")};
    s.u = ControlInput{parse_double(f[5], "a"), parse_double(f[6], "beta")};
    s.min_h = parse_double(f[7], "min_h");
    out.push_back(s);
  });
  return out;
}

void write_region_csv(std::ostream & out, const FeasibilityGrid & grid)
{
  out << kRegionHeader << '\n';
  for (const RegionCell & c : grid.cells) {
    const MarginReport & m = c.margins;
    out << format_double(c.k_lambda) << ',' << format_double(c.k_mu) << ',' << format_double(m.phi1_min)
        << ',' << format_double(m.d1_min) << ',' << format_double(m.phi2_min) << ','
        << format_double(m.d2_min) << ',' << int{m.case1_ok} << ',' << int{m.case2_ok} << ','
        << int{m.feasible} << '\n';
  }
}

std::vector<RegionCell> read_region_csv(std::istream & in)
{
  std::vector<RegionCell> out;
  read_rows(in, kRegionHeader, 9, [&](const std::vector<std::string> & f) {
    RegionCell c;
    c.k_lambda = parse_double(f[0], "k_lambda");
    c.k_mu = parse_double(f[1], "k_mu");
    c.margins.phi1_min = parse_double(f[2], "phi1_min");
    c.margins.d1_min = parse_double(f[3], "d1_min");
    c.margins.phi2_min = parse_double(f[4], "phi2_min");
    c.margins.d2_min = parse_double(f[5], "d2_min");
    c.margins.case1_ok = parse_bool01(f[6], "case1_ok");
    c.margins.case2_ok = parse_bool01(f[7], "case2_ok");
    c.margins.feasible = parse_bool01(f[8], "feasible");
    c.reason = std::isfinite(c.margins.phi1_min) ? CellReason::kOk : CellReason::kInvalidBounds;
    out.push_back(c);
  });
  return out;
}

void write_region_svg(std::ostream & out, const FeasibilityGrid & grid, const RegionMarker & marker)
{
  constexpr double kW = 640.0;
  constexpr double kH = 640.0;
  constexpr double kPad = 70.0;
  const std::size_t nl = grid.n_k_lambda;
  const std::size_t nm = grid.n_k_mu;

  // Cell i spans [i - 0.5, i + 0.5] in log index space; a 1-cell axis gets a unit decade.
  auto log_edges = [](double lo, double hi, std::size_t n) {
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    const double step = n > 1 ? (b - a) / static_cast<double>(n - 1) : 1.0;
    return std::pair<double, double>{a - 0.5 * step, b + 0.5 * step};
  };
  const auto [lx0, lx1] = log_edges(grid.at(0, 0).k_lambda, grid.at(nl - 1, 0).k_lambda, nl);
  const auto [ly0, ly1] = log_edges(grid.at(0, 0).k_mu, grid.at(0, nm - 1).k_mu, nm);
  const Frame fr{lx0, lx1, ly0, ly1, kPad, 30.0, kW - kPad - 20.0, kH - kPad - 30.0};
  const double cw = fr.width / static_cast<double>(nl);
  const double ch = fr.height / static_cast<double>(nm);

  out << fmt::format(
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
    kW, kH, kW, kH);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g id=\"cells\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t im = 0; im < nm; ++im) {
    for (std::size_t il = 0; il < nl; ++il) {
      const RegionCell & c = grid.at(il, im);
      const MarginReport & m = c.margins;
      const char * fill = m.feasible ? "#2e8b57" : m.case1_ok ? "#9ecae1" : m.case2_ok ? "#fdae6b" : "#eeeeee";
      out << fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" data-k-lambda=\"{}\" "
        "data-k-mu=\"{}\" data-case1=\"{}\" data-case2=\"{}\" data-feasible=\"{}\"/>\n",
        f3(fr.left + static_cast<double>(il) * cw), f3(fr.top + static_cast<double>(nm - 1 - im) * ch),
        f3(cw), f3(ch), fill, format_double(c.k_lambda), format_double(c.k_mu), int{m.case1_ok},
        int{m.case2_ok}, int{m.feasible});
    }
  }
  out << "</g>\n";

  // Boundaries: an edge between neighbours whose case verdicts differ.
  auto boundary = [&](const char * id, const char * stroke, auto ok) {
    out << fmt::format("<g id=\"{}\" stroke=\"{}\" stroke-width=\"1.5\">\n", id, stroke);
    for (std::size_t im = 0; im < nm; ++im) {
      for (std::size_t il = 0; il < nl; ++il) {
        const bool here = ok(grid.at(il, im));
        const double x = fr.left + static_cast<double>(il + 1) * cw;
        const double y_top = fr.top + static_cast<double>(nm - 1 - im) * ch;
        if (il + 1 < nl && here != ok(grid.at(il + 1, im))) {
          out << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", f3(x), f3(y_top), f3(x),
                             f3(y_top + ch));
        }
        if (im + 1 < nm && here != ok(grid.at(il, im + 1))) {
          const double x_left = fr.left + static_cast<double>(il) * cw;
          out << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n", f3(x_left), f3(y_top),
                             f3(x_left + cw), f3(y_top));
        }
      }
    }
    out << "</g>\n";
  };
  boundary("case1-boundary", "#08519c", [](const RegionCell & c) { return c.margins.case1_ok; });
  boundary("case2-boundary", "#a63603", [](const RegionCell & c) { return c.margins.case2_ok; });

  out << "<g id=\"axes\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  out << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     f3(fr.left), f3(fr.top), f3(fr.width), f3(fr.height));
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    const double x = fr.sx(e);
    out << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>", f3(x),
                       f3(fr.top + fr.height), f3(fr.top + fr.height + 5));
    out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">1e{}</text>\n", f3(x),
                       f3(fr.top + fr.height + 20), e);
  }
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
    const double y = fr.sy(e);
    out << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>", f3(fr.left - 5),
                       f3(y), f3(fr.left));
    out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">1e{}</text>\n", f3(fr.left - 8),
                       f3(y + 4), e);
  }
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">k_lambda (log)</text>\n",
                     f3(fr.left + fr.width / 2), f3(kH - 20));
  out << fmt::format(
    "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">k_mu (log)</text>\n",
    f3(fr.top + fr.height / 2));
  out << "</g>\n";

  const double mx = fr.sx(std::log10(marker.k_lambda));
  const double my = fr.sy(std::log10(marker.k_mu));
  out << fmt::format(
    "<g id=\"marker\" data-k-lambda=\"{}\" data-k-mu=\"{}\" data-feasible=\"{}\">"
    "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>"
    "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"red\">"
    "({}, {}) {}</text></g>\n",
    format_double(marker.k_lambda), format_double(marker.k_mu), int{marker.feasible}, f3(mx), f3(my),
    f3(mx + 8), f3(my - 8), format_double(marker.k_lambda), format_double(marker.k_mu),
    marker.feasible ? "feasible" : "infeasible");
  out << "</svg>\n";
}

std::vector<SvgCell> read_region_svg(std::istream & in)
{
  static const std::regex kCell(
    "data-k-lambda=\"([^\"]+)\" data-k-mu=\"([^\"]+)\" data-case1=\"([01])\" data-case2=\"([01])\" "
    "data-feasible=\"([01])\"");
  std::vector<SvgCell> out;
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (line.rfind("<rect", 0) == 0 && std::regex_search(line, m, kCell)) {
      out.push_back(SvgCell{parse_double(m[1], "data-k-lambda"), parse_double(m[2], "data-k-mu"),
                            m[3] == "1", m[4] == "1", m[5] == "1"});
    }
  }
  return out;
}

void write_trace_svg(std::ostream & out, const Scenario & scenario, const TrialResult & result,
                     double robot_radius)
{
  double x0 = std::min(scenario.start.x, scenario.goal.x);
  double x1 = std::max(scenario.start.x, scenario.goal.x);
  double y0 = std::min(scenario.start.y, scenario.goal.y);
  double y1 = std::max(scenario.start.y, scenario.goal.y);
  auto grow = [&](double x, double y, double r) {
    x0 = std::min(x0, x - r);
    x1 = std::max(x1, x + r);
    y0 = std::min(y0, y - r);
    y1 = std::max(y1, y + r);
  };
  for (const TrajectorySample & s : result.trajectory) grow(s.robot.x, s.robot.y, robot_radius);
  for (const ObstacleState & o : scenario.obstacles) grow(o.x, o.y, o.radius);
  for (const auto & snap : result.obstacle_history)
    for (const ObstacleState & o : snap) grow(o.x, o.y, o.radius);
  x0 -= 1.0;
  x1 += 1.0;
  y0 -= 1.0;
  y1 += 1.0;

  constexpr double kW = 800.0;
  const double scale = (kW - 40.0) / (x1 - x0);
  const double h = (y1 - y0) * scale + 40.0;
  const Frame fr{x0, x1, y0, y1, 20.0, 20.0, kW - 40.0, h - 40.0};

  out << fmt::format(
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", kW,
    f3(h), kW, f3(h));
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << fmt::format("<g id=\"status\"><text x=\"24\" y=\"36\" font-family=\"sans-serif\" font-size=\"14\">"
                     "{} at t={}</text></g>\n",
                     to_string(result.status), format_double(result.t_end));

  out << "<g id=\"obstacles\">\n";
  for (std::size_t i = 0; i < scenario.obstacles.size(); ++i) {
    const ObstacleState & o = scenario.obstacles[i];
    out << fmt::format(
      "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#fcbba1\" stroke=\"#cb181d\" fill-opacity=\"0.6\"/>\n",
      f3(fr.sx(o.x)), f3(fr.sy(o.y)), f3(o.radius * scale));
    if (result.obstacle_history.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"#cb181d\" stroke-dasharray=\"4 3\" points=\"";
      for (const auto & snap : result.obstacle_history) {
        out << f3(fr.sx(snap[i].x)) << ',' << f3(fr.sy(snap[i].y)) << ' ';
      }
      out << "\"/>\n";
    }
  }
  out << "</g>\n";

  out << "<g id=\"robot\">\n<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
  for (const TrajectorySample & s : result.trajectory) {
    out << f3(fr.sx(s.robot.x)) << ',' << f3(fr.sy(s.robot.y)) << ' ';
  }
  out << "\"/>\n</g>\n";
  out << fmt::format("<circle id=\"start\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"#08519c\"/>\n",
                     f3(fr.sx(scenario.start.x)), f3(fr.sy(scenario.start.y)));
  out << fmt::format("<circle id=\"goal\" cx=\"{}\" cy=\"{}\" r=\"6\" fill=\"none\" stroke=\"#238b45\" "
                     "stroke-width=\"2\"/>\n",
                     f3(fr.sx(scenario.goal.x)), f3(fr.sy(scenario.goal.y)));
  out << "</svg>\n";
}

json verify_to_json(const ViolationReport & report, const DpcbfParams & params)
{
  json j;
  j["n"] = report.n;
  j["n_violations"] = report.n_violations;
  j["attempts"] = report.attempts;
  j["worst_margin"] = num(report.worst_margin);
  j["k_lambda"] = params.k_lambda;
  j["k_mu"] = params.k_mu;
  if (report.worst_state) {
    const SampledBoundaryState & s = *report.worst_state;
    j["worst_state"] = {
      {"robot", robot_json(s.robot)},
      {"obstacle", obstacle_json(s.obstacle)},
      {"los",
       {{"p_norm", s.rel.p_norm}, {"d", s.rel.d}, {"v_norm", s.rel.v_norm}, {"psi_til", s.rel.psi_til},
        {"theta_til", s.rel.theta_til}, {"theta_obs_til", s.rel.theta_obs_til}}},
    };
  } else {
    j["worst_state"] = nullptr;
  }
  return j;
}

void write_verify_json(std::ostream & out, const ViolationReport & report, const DpcbfParams & params)
{
  out << verify_to_json(report, params).dump(2) << '\n';
}

ViolationReport read_verify_json(std::istream & in)
{
  ViolationReport r;
  try {
    const json doc = json::parse(in);
    r.n = doc.at("n").get<std::size_t>();
    r.n_violations = doc.at("n_violations").get<std::size_t>();
    r.attempts = doc.at("attempts").get<std::size_t>();
    r.worst_margin = num_or_inf(doc.at("worst_margin"));
    const json & ws = doc.at("worst_state");
    if (!ws.is_null()) {
      SampledBoundaryState s;
      s.robot = robot_from(ws.at("robot"));
      s.obstacle = obstacle_from(ws.at("obstacle"));
      s.rel = relative_kinematics(s.robot, s.obstacle, 0.0);
      r.worst_state = s;
    }
  } catch (const json::exception & e) {
    throw ParseError(std::string("verify JSON: ") + e.what());
  }
  return r;
}

json scenario_to_json(const Scenario & s)
{
  json obstacles = json::array();
  for (const ObstacleState & o : s.obstacles) obstacles.push_back(obstacle_json(o));
  return {{"start", robot_json(s.start)}, {"goal", {s.goal.x, s.goal.y}}, {"duration", s.duration},
          {"seed", s.seed}, {"obstacles", obstacles}};
}

Scenario scenario_from_json(const json & doc)
{
  Scenario s;
  try {
    s.start = robot_from(doc.at("start"));
    const json & g = doc.at("goal");
    if (!g.is_array() || g.size() != 2) {
      throw ParseError("scenario: goal must be [x, y]");
    }
    s.goal = Vec2{g[0].get<double>(), g[1].get<double>()};
    s.duration = doc.value("duration", 40.0);
    s.seed = doc.value("seed", std::uint64_t{0});
    for (const json & o : doc.at("obstacles")) s.obstacles.push_back(obstacle_from(o));
  } catch (const json::exception & e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  if (!(s.duration > 0.0)) {
    throw ParseError("scenario: duration must be positive");
  }
  if (norm(s.goal - s.start.position()) == 0.0) {
    throw ParseError("scenario: goal coincides with the start");
  }
  for (const ObstacleState & o : s.obstacles) {
    if (!(o.radius > 0.0) || o.v_obs < 0.0) {
      throw ParseError("scenario: obstacle radius must be positive and v_obs non-negative");
    }
  }
  return s;
}

void write_scenario_json(std::ostream & out, const Scenario & scenario)
{
  out << scenario_to_json(scenario).dump(2) << '\n';
}

Scenario read_scenario_json(std::istream & in)
{
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace dpcbf
