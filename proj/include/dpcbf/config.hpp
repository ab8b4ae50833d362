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

#ifndef DPCBF__CONFIG_HPP_
#define DPCBF__CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "dpcbf/barriers.hpp"
#include "dpcbf/sim.hpp"
#include "dpcbf/validity.hpp"

namespace dpcbf
{

class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(const std::string & what) : std::runtime_error(what) {}
};

inline constexpr int kConfigSchemaVersion = 1;

struct VerifySettings
{
  std::size_t samples{100000};
  std::uint64_t seed{1};
  DriftModel drift{DriftModel::kRobot};
  std::size_t batch_size{10000};
};

/// Everything a CLI run needs. Defaults reproduce the reference simulation parameters.
struct Config
{
  int schema_version{kConfigSchemaVersion};
  InputLimits limits;
  DpcbfParams dpcbf;
  double c3bf_gamma{1.0};
  double dt{0.05};
  double robot_radius{0.3};
  double vrel_floor{kDefaultVrelFloor};
  BoundOptions bounds;
  double combined_radius{1.0};  // robot + largest obstacle radius used by the region/verify bounds
  ControllerGains controller;
  ScenarioConfig scenario;
  double goal_radius{0.5};
  bool dt_weighted_cost{false};
  ExperimentConfig experiment;
  RegionGrid region;
  VerifySettings verify;
  std::string output_dir{"out"};

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  TrialSettings trial_settings() const;
  ScenarioConfig scenario_config() const;
  BoundTemplate bound_template() const;
  MethodFactory method_factory() const;
};

/// Overlays `doc` onto `base`. Unknown keys and type mismatches raise ConfigError with the
/// dotted key path. Does not call validate().
Config config_from_json(const nlohmann::json & doc, Config base = {});
nlohmann::json config_to_json(const Config & config);

Config load_config(const std::filesystem::path & path, Config base = {});

}  // namespace dpcbf

#endif  // DPCBF__CONFIG_HPP_
