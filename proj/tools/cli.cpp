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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dpcbf/config.hpp"
#include "dpcbf/io.hpp"
#include "dpcbf/sim.hpp"
#include "dpcbf/validity.hpp"

namespace dpcbf::cli
{

namespace fs = std::filesystem;

namespace
{

class UsageError : public std::runtime_error
{
public:
  explicit UsageError(const std::string & what) : std::runtime_error(what) {}
};

struct CommonFlags
{
  std::string config_path;
  std::string out_dir;
  std::optional<double> k_lambda;
  std::optional<double> k_mu;
  std::optional<double> a_max;
  std::optional<double> beta_max;
};

struct SimulateFlags
{
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> trials;
  std::vector<std::size_t> obstacles;
  std::vector<double> radius_caps;
  std::vector<std::string> methods;
};

struct RegionFlags
{
  std::string grid;
};

struct VerifyFlags
{
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::string drift;
};

struct TraceFlags
{
  std::string preset;
  std::string scenario_file;
  std::string method{"dpcbf"};
};

void add_common(CLI::App & cmd, CommonFlags & f)
{
  cmd.add_option("--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd.add_option("--out", f.out_dir, "output directory (default: $DPCBF_OUT_DIR, then config)");
  cmd.add_option("--k-lambda", f.k_lambda, "DPCBF curvature gain");
  cmd.add_option("--k-mu", f.k_mu, "DPCBF offset gain");
  cmd.add_option("--a-max", f.a_max, "acceleration limit [m/s^2]");
  cmd.add_option("--beta-max", f.beta_max, "slip-angle limit [rad]");
}

Config resolve_config(const CommonFlags & f)
{
  Config base;
  if (const char * env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    base.output_dir = env;
  }
  Config c = f.config_path.empty() ? base : load_config(f.config_path, base);
  if (!f.out_dir.empty()) c.output_dir = f.out_dir;
  if (f.k_lambda) c.dpcbf.k_lambda = *f.k_lambda;
  if (f.k_mu) c.dpcbf.k_mu = *f.k_mu;
  if (f.a_max) c.limits.a_max = *f.a_max;
  if (f.beta_max) c.limits.beta_max = *f.beta_max;
  return c;
}

std::ofstream open_output(const fs::path & path)
{
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  return out;
}

void finish(std::ofstream & stream, const fs::path & path)
{
  stream.close();
  if (!stream) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

int cmd_simulate(Config c, const SimulateFlags & f, std::ostream & out)
{
  if (f.seed) c.experiment.master_seed = *f.seed;
  if (f.jobs) c.experiment.jobs = *f.jobs;
  if (f.trials) c.experiment.trials_per_cell = *f.trials;
  if (!f.obstacles.empty()) c.experiment.obstacle_counts = f.obstacles;
  if (!f.radius_caps.empty()) c.experiment.radius_caps = f.radius_caps;
  if (!f.methods.empty()) c.experiment.methods = f.methods;
  c.validate();

  const ExperimentResult result =
    run_experiment(c.experiment, c.scenario_config(), c.trial_settings(), c.method_factory());

  const fs::path dir(c.output_dir);
  const fs::path trials_path = dir / "trials.csv";
  const fs::path summary_path = dir / "summary.json";
  auto trials = open_output(trials_path);
  write_trials_csv(trials, result.trials);
  finish(trials, trials_path);
  auto summary = open_output(summary_path);
  write_summary_json(summary, result);
  finish(summary, summary_path);

  for (const MetricsCell & m : result.table) {
    fmt::print(out, "{:<6} n={:<3} cap={:<4} success={:.3f} infeasible={:.3f} collision={:.3f} timeout={:.3f}\n",
               m.method, m.n_obstacles, m.radius_cap, m.success_rate, m.infeasible_rate,
               m.collision_rate, m.timeout_rate);
  }
  if (!result.generation_failures.empty()) {
    fmt::print(out, "scenario generation failures: {}\n", result.generation_failures.size());
  }
  fmt::print(out, "wrote {} and {}\n", trials_path.string(), summary_path.string());
  return kExitOk;
}

void parse_grid(const std::string & text, RegionGrid & grid)
{
  static const std::regex kGrid(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, kGrid)) {
    throw UsageError("--grid: expected NxM, got '" + text + "'");
  }
  grid.n_k_lambda = std::stoul(m[1]);
  grid.n_k_mu = std::stoul(m[2]);
}

int cmd_region(Config c, const RegionFlags & f, std::ostream & out)
{
  if (!f.grid.empty()) parse_grid(f.grid, c.region);
  c.validate();
  const BoundTemplate tmpl = c.bound_template();
  const FeasibilityGrid grid = scan_region(c.region, tmpl);

  RegionMarker marker{c.dpcbf.k_lambda, c.dpcbf.k_mu, false};
  nlohmann::json verdict = {{"k_lambda", marker.k_lambda}, {"k_mu", marker.k_mu}};
  try {
    const BoundSet b = derive_bounds(tmpl.limits, tmpl.r, marker.k_mu, tmpl.options);
    const MarginReport m = evaluate_margins(marker.k_lambda, marker.k_mu, b);
    marker.feasible = m.feasible;
    verdict.update({{"phi1_min", m.phi1_min}, {"d1_min", m.d1_min}, {"phi2_min", m.phi2_min},
                    {"d2_min", m.d2_min}, {"case1_ok", m.case1_ok}, {"case2_ok", m.case2_ok},
                    {"feasible", m.feasible}});
  } catch (const InvalidBoundsError & e) {
    verdict.update({{"feasible", false}, {"reason", e.what()}});
  }
  std::size_t n_feasible = 0;
  for (const RegionCell & cell : grid.cells) n_feasible += cell.margins.feasible ? 1 : 0;

  const fs::path dir(c.output_dir);
  const fs::path csv_path = dir / "region.csv";
  const fs::path svg_path = dir / "region.svg";
  const fs::path point_path = dir / "region_point.json";
  auto csv = open_output(csv_path);
  write_region_csv(csv, grid);
  finish(csv, csv_path);
  auto svg = open_output(svg_path);
  write_region_svg(svg, grid, marker);
  finish(svg, svg_path);
  auto point = open_output(point_path);
  point << verdict.dump(2) << '\n';
  finish(point, point_path);

  fmt::print(out, "grid {}x{}: {} feasible cells\n", grid.n_k_lambda, grid.n_k_mu, n_feasible);
  fmt::print(out, "point ({}, {}): {}\n", format_double(marker.k_lambda), format_double(marker.k_mu),
             marker.feasible ? "feasible" : "infeasible");
  fmt::print(out, "wrote {}, {} and {}\n", csv_path.string(), svg_path.string(), point_path.string());
  return kExitOk;
}

int cmd_verify(Config c, const VerifyFlags & f, std::ostream & out, std::ostream & err)
{
  if (f.samples) c.verify.samples = *f.samples;
  if (f.seed) c.verify.seed = *f.seed;
  if (f.drift == "robot") c.verify.drift = DriftModel::kRobot;
  if (f.drift == "total") c.verify.drift = DriftModel::kTotal;
  c.validate();

  const BoundSet b = derive_bounds(c.limits, c.combined_radius, c.dpcbf.k_mu, c.bounds);
  NagumoOptions opts;
  opts.seed = c.verify.seed;
  opts.drift = c.verify.drift;
  opts.batch_size = c.verify.batch_size;
  ViolationReport report;
  try {
    report = nagumo_scan(c.verify.samples, c.dpcbf, b, c.limits, opts);
  } catch (const SamplerStarvedError & e) {
    fmt::print(err, "verification could not run: {}\n", e.what());
    return kExitVerificationFailed;
  }

  const fs::path path = fs::path(c.output_dir) / "verify.json";
  auto file = open_output(path);
  write_verify_json(file, report, c.dpcbf);
  finish(file, path);
  fmt::print(out, "samples={} violations={} worst_margin={}\n", report.n, report.n_violations,
             format_double(report.worst_margin));
  fmt::print(out, "wrote {}\n", path.string());
  return report.n_violations == 0 ? kExitOk : kExitVerificationFailed;
}

Scenario empty_preset()
{
  Scenario s;
  s.start = RobotState{0.0, 0.0, 0.0, 0.5};
  s.goal = Vec2{25.0, 0.0};
  return s;
}

int cmd_trace(Config c, const TraceFlags & f, std::ostream & out)
{
  c.validate();
  Scenario scenario;
  if (!f.scenario_file.empty()) {
    std::ifstream in(f.scenario_file);
    if (!in) throw UsageError("cannot open scenario file '" + f.scenario_file + "'");
    scenario = read_scenario_json(in);
  } else if (f.preset.empty() || f.preset == "surround") {
    scenario = surround_preset();
  } else if (f.preset == "blocking") {
    scenario = blocking_obstacle_preset();
  } else if (f.preset == "empty") {
    scenario = empty_preset();
  } else {
    throw UsageError("--preset: expected surround, blocking or empty");
  }

  const auto method = c.method_factory()(f.method);
  TrialSettings settings = c.trial_settings();
  settings.record_trajectory = true;
  const TrialResult result = run_trial(scenario, *method, settings);

  const fs::path dir(c.output_dir);
  const fs::path csv_path = dir / "trajectory.csv";
  const fs::path svg_path = dir / "trace.svg";
  const fs::path scenario_path = dir / "scenario.json";
  auto csv = open_output(csv_path);
  write_trajectory_csv(csv, result.trajectory);
  finish(csv, csv_path);
  auto svg = open_output(svg_path);
  write_trace_svg(svg, scenario, result, c.robot_radius);
  finish(svg, svg_path);
  auto sc = open_output(scenario_path);
  write_scenario_json(sc, scenario);
  finish(sc, scenario_path);

  fmt::print(out, "{}: {} at t={} qp_cost_total={} min_clearance={}\n", f.method, to_string(result.status),
             format_double(result.t_end), format_double(result.qp_cost_total),
             format_double(result.min_clearance));
  fmt::print(out, "wrote {}, {} and {}\n", csv_path.string(), svg_path.string(), scenario_path.string());
  return kExitOk;
}

}  // namespace

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"DPCBF safety filter: experiments, region scans, boundary checks and traces", "dpcbf"};
  app.require_subcommand(1);

  CommonFlags common;
  SimulateFlags sim_f;
  RegionFlags region_f;
  VerifyFlags verify_f;
  TraceFlags trace_f;

  auto * simulate = app.add_subcommand("simulate", "run the batch experiment");
  add_common(*simulate, common);
  simulate->add_option("--seed", sim_f.seed, "master seed");
  simulate->add_option("--jobs", sim_f.jobs, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--trials", sim_f.trials, "trials per cell")->check(CLI::PositiveNumber);
  simulate->add_option("--obstacles", sim_f.obstacles, "obstacle counts")->delimiter(',');
  simulate->add_option("--radius-caps", sim_f.radius_caps, "obstacle radius caps [m]")->delimiter(',');
  simulate->add_option("--methods", sim_f.methods, "methods to compare")->delimiter(',');

  auto * region = app.add_subcommand("region", "scan the (k_lambda, k_mu) feasible region");
  add_common(*region, common);
  region->add_option("--grid", region_f.grid, "grid size NxM (k_lambda x k_mu)");

  auto * verify = app.add_subcommand("verify", "sample the safety boundary and check the Nagumo margin");
  add_common(*verify, common);
  verify->add_option("--samples", verify_f.samples, "number of boundary samples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_f.seed, "sampler seed");
  verify->add_option("--drift", verify_f.drift, "drift model")->check(CLI::IsMember({"robot", "total"}));

  auto * trace = app.add_subcommand("trace", "run one trial and plot it");
  add_common(*trace, common);
  auto * preset = trace->add_option("--preset", trace_f.preset, "surround, blocking or empty");
  trace->add_option("--scenario-file", trace_f.scenario_file, "scenario JSON")
    ->check(CLI::ExistingFile)
    ->excludes(preset);
  trace->add_option("--method", trace_f.method, "barrier method")->check(CLI::IsMember({"dpcbf", "c3bf"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Config config = resolve_config(common);
    if (*simulate) return cmd_simulate(config, sim_f, out);
    if (*region) return cmd_region(config, region_f, out);
    if (*verify) return cmd_verify(config, verify_f, out, err);
    return cmd_trace(config, trace_f, out);
  } catch (const ConfigError & e) {
    fmt::print(err, "config error: {}\n", e.what());
  } catch (const UsageError & e) {
    fmt::print(err, "usage error: {}\n", e.what());
  } catch (const ParseError & e) {
    fmt::print(err, "input error: {}\n", e.what());
  } catch (const std::exception & e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return kExitUsage;
}

}  // namespace dpcbf::cli
