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

#ifndef DPCBF__IO_HPP_
#define DPCBF__IO_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpcbf/sim.hpp"
#include "dpcbf/validity.hpp"

namespace dpcbf
{

class ParseError : public std::runtime_error
{
public:
  explicit ParseError(const std::string & what) : std::runtime_error(what) {}
};

/// Shortest text that parses back to the same double.
std::string format_double(double x);

// Per-trial results. Trajectories are not stored here.
void write_trials_csv(std::ostream & out, const std::vector<TrialRecord> & trials);
std::vector<TrialRecord> read_trials_csv(std::istream & in);

nlohmann::json summary_to_json(const ExperimentResult & result);
void write_summary_json(std::ostream & out, const ExperimentResult & result);
MetricsTable read_summary_json(std::istream & in);

void write_trajectory_csv(std::ostream & out, const std::vector<TrajectorySample> & samples);
std::vector<TrajectorySample> read_trajectory_csv(std::istream & in);

void write_region_csv(std::ostream & out, const FeasibilityGrid & grid);
std::vector<RegionCell> read_region_csv(std::istream & in);

struct RegionMarker
{
  double k_lambda{0.144};
  double k_mu{0.505};
  bool feasible{false};
};

/// Log-log cell map. Every cell rect carries data-k-lambda, data-k-mu, data-case1, data-case2
/// and data-feasible attributes so it can be compared against the CSV.
void write_region_svg(std::ostream & out, const FeasibilityGrid & grid, const RegionMarker & marker);

struct SvgCell
{
  double k_lambda{0.0};
  double k_mu{0.0};
  bool case1_ok{false};
  bool case2_ok{false};
  bool feasible{false};
};

std::vector<SvgCell> read_region_svg(std::istream & in);

void write_trace_svg(std::ostream & out, const Scenario & scenario, const TrialResult & result,
                     double robot_radius);

nlohmann::json verify_to_json(const ViolationReport & report, const DpcbfParams & params);
void write_verify_json(std::ostream & out, const ViolationReport & report, const DpcbfParams & params);
ViolationReport read_verify_json(std::istream & in);

nlohmann::json scenario_to_json(const Scenario & scenario);
Scenario scenario_from_json(const nlohmann::json & doc);
void write_scenario_json(std::ostream & out, const Scenario & scenario);
Scenario read_scenario_json(std::istream & in);

}  // namespace dpcbf

#endif  // DPCBF__IO_HPP_
