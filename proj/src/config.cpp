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

#include "dpcbf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>
#include <vector>

namespace dpcbf
{

using nlohmann::json;

namespace
{

class ObjectReader
{
public:
  ObjectReader(const json & node, std::string path) : node_(node), path_(std::move(path))
  {
    if (!node_.is_object()) {
      throw ConfigError(path_ + ": expected an object");
    }
  }

  ObjectReader(const ObjectReader &) = delete;
  ObjectReader & operator=(const ObjectReader &) = delete;

  void finish() const
  {
    for (const auto & [key, value] : node_.items()) {
      if (seen_.count(key) == 0) {
        throw ConfigError(join(key) + ": unknown key");
      }
    }
  }

  const json * find(const std::string & key)
  {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::string join(const std::string & key) const
  {
    return path_.empty() ? key : path_ + "." + key;
  }

  void number(const std::string & key, double & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number()) {
        throw ConfigError(join(key) + ": expected a number");
      }
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const std::string & key, Int & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
        throw ConfigError(join(key) + ": expected a non-negative integer");
      }
      out = v->get<Int>();
    }
  }

  void boolean(const std::string & key, bool & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_boolean()) {
        throw ConfigError(join(key) + ": expected true or false");
      }
      out = v->get<bool>();
    }
  }

  void string(const std::string & key, std::string & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_string()) {
        throw ConfigError(join(key) + ": expected a string");
      }
      out = v->get<std::string>();
    }
  }

  template <typename T, typename Check>
  void array(const std::string & key, std::vector<T> & out, Check check, const char * what)
  {
    if (const json * v = find(key)) {
      if (!v->is_array()) {
        throw ConfigError(join(key) + ": expected an array");
      }
      std::vector<T> tmp;
      for (const json & e : *v) {
        if (!check(e)) {
          throw ConfigError(join(key) + ": elements must be " + what);
        }
        tmp.push_back(e.get<T>());
      }
      out = std::move(tmp);
    }
  }

private:
  const json & node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void section(ObjectReader & parent, const std::string & key, Fn fn)
{
  if (const json * v = parent.find(key)) {
    ObjectReader child(*v, parent.join(key));
    fn(child);
    child.finish();
  }
}

void require(bool ok, const std::string & field, const std::string & rule)
{
  if (!ok) {
    throw ConfigError(field + " " + rule);
  }
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

std::string rule_name(VrelMaxRule r)
{
  switch (r) {
    case VrelMaxRule::kSum:
      return "sum";
    case VrelMaxRule::kRobotMax:
      return "robot_max";
    case VrelMaxRule::kExplicit:
      return "explicit";
  }
  return "sum";
}

VrelMaxRule parse_rule(const std::string & s)
{
  if (s == "sum") return VrelMaxRule::kSum;
  if (s == "robot_max") return VrelMaxRule::kRobotMax;
  if (s == "explicit") return VrelMaxRule::kExplicit;
  throw ConfigError("bounds.vrel_max_rule: expected one of sum, robot_max, explicit");
}

std::string drift_name(DriftModel d) { return d == DriftModel::kTotal ? "total" : "robot"; }

DriftModel parse_drift(const std::string & s)
{
  if (s == "robot") return DriftModel::kRobot;
  if (s == "total") return DriftModel::kTotal;
  throw ConfigError("verify.drift: expected robot or total");
}

}  // namespace

void Config::validate() const
{
  require(schema_version == kConfigSchemaVersion, "schema_version",
          "must be " + std::to_string(kConfigSchemaVersion));
  try {
    limits.validate();
    dpcbf.validate();
  } catch (const std::invalid_argument & e) {
    throw ConfigError(e.what());
  }
  require(positive(c3bf_gamma), "c3bf.gamma", "must be positive and finite");
  require(positive(dt), "dt", "must be positive and finite");
  require(positive(robot_radius), "robot_radius", "must be positive and finite");
  require(positive(vrel_floor), "vrel_floor", "must be positive and finite");

  require(non_negative(bounds.v_obs_max), "bounds.v_obs_max", "must be non-negative and finite");
  require(bounds.s_bar >= 0.0 && bounds.s_bar < 1.0, "bounds.s_bar", "must lie in [0, 1)");
  require(positive(bounds.vrel_max), "bounds.vrel_max", "must be positive and finite");
  require(positive(combined_radius), "bounds.combined_radius", "must be positive and finite");

  require(non_negative(controller.k_v), "controller.k_v", "must be non-negative and finite");
  require(non_negative(controller.k_h), "controller.k_h", "must be non-negative and finite");
  require(non_negative(controller.k_d), "controller.k_d", "must be non-negative and finite");
  require(positive(controller.v_des), "controller.v_des", "must be positive and finite");

  require(positive(scenario.radius_min), "scenario.radius_min", "must be positive and finite");
  require(non_negative(scenario.obstacle_speed_max), "scenario.obstacle_speed_max",
          "must be non-negative and finite");
  require(positive(scenario.course_length), "scenario.course_length", "must be positive and finite");
  require(non_negative(scenario.corridor_width), "scenario.corridor_width",
          "must be non-negative and finite");
  require(positive(scenario.duration), "scenario.duration", "must be positive and finite");
  require(non_negative(scenario.initial_speed) && scenario.initial_speed <= limits.v_max,
          "scenario.initial_speed", "must lie in [0, limits.v_max]");
  require(non_negative(scenario.min_spawn_distance), "scenario.min_spawn_distance",
          "must be non-negative and finite");
  require(positive(goal_radius), "scenario.goal_radius", "must be positive and finite");

  require(!experiment.methods.empty(), "experiment.methods", "must not be empty");
  for (const std::string & m : experiment.methods) {
    require(m == "dpcbf" || m == "c3bf", "experiment.methods", "entries must be dpcbf or c3bf");
  }
  for (double cap : experiment.radius_caps) {
    require(std::isfinite(cap) && cap >= scenario.radius_min, "experiment.radius_caps",
            "entries must be >= scenario.radius_min");
  }
  require(experiment.trials_per_cell >= 1, "experiment.trials_per_cell", "must be at least 1");
  require(experiment.jobs >= 1, "experiment.jobs", "must be at least 1");

  require(region.n_k_lambda >= 1 && region.n_k_mu >= 1, "region", "grid sizes must be at least 1");
  require(positive(region.k_lambda_min) && region.k_lambda_max >= region.k_lambda_min &&
            std::isfinite(region.k_lambda_max),
          "region.k_lambda", "range must satisfy 0 < min <= max");
  require(positive(region.k_mu_min) && region.k_mu_max >= region.k_mu_min &&
            std::isfinite(region.k_mu_max),
          "region.k_mu", "range must satisfy 0 < min <= max");

  require(verify.samples >= 1, "verify.samples", "must be at least 1");
  require(verify.batch_size >= 1, "verify.batch_size", "must be at least 1");
  require(!output_dir.empty(), "output_dir", "must not be empty");
}

TrialSettings Config::trial_settings() const
{
  TrialSettings s;
  s.limits = limits;
  s.gains = controller;
  s.robot_radius = robot_radius;
  s.dt = dt;
  s.goal_radius = goal_radius;
  s.dt_weighted_cost = dt_weighted_cost;
  return s;
}

ScenarioConfig Config::scenario_config() const
{
  ScenarioConfig s = scenario;
  s.robot_radius = robot_radius;
  s.safety_buffer_s = limits.safety_buffer_s;
  return s;
}

BoundTemplate Config::bound_template() const { return BoundTemplate{limits, combined_radius, bounds}; }

MethodFactory Config::method_factory() const
{
  return [params = dpcbf, gamma = c3bf_gamma, floor = vrel_floor](std::string_view name) {
    return make_method(name, params, gamma, floor);
  };
}

Config config_from_json(const json & doc, Config base)
{
  Config c = std::move(base);
  ObjectReader root(doc, "");
  root.integer("schema_version", c.schema_version);
  section(root, "limits", [&](ObjectReader & r) {
    r.number("a_max", c.limits.a_max);
    r.number("beta_max", c.limits.beta_max);
    r.number("v_min", c.limits.v_min);
    r.number("v_max", c.limits.v_max);
    r.number("l_r", c.limits.l_r);
    r.number("sensing_range", c.limits.sensing_range);
    r.number("safety_buffer_s", c.limits.safety_buffer_s);
  });
  section(root, "dpcbf", [&](ObjectReader & r) {
    r.number("k_lambda", c.dpcbf.k_lambda);
    r.number("k_mu", c.dpcbf.k_mu);
    r.number("gamma", c.dpcbf.gamma);
  });
  section(root, "c3bf", [&](ObjectReader & r) { r.number("gamma", c.c3bf_gamma); });
  root.number("dt", c.dt);
  root.number("robot_radius", c.robot_radius);
  root.number("vrel_floor", c.vrel_floor);
  section(root, "bounds", [&](ObjectReader & r) {
    r.number("v_obs_max", c.bounds.v_obs_max);
    r.number("s_bar", c.bounds.s_bar);
    std::string rule = rule_name(c.bounds.vrel_rule);
    r.string("vrel_max_rule", rule);
    c.bounds.vrel_rule = parse_rule(rule);
    r.number("vrel_max", c.bounds.vrel_max);
    r.number("combined_radius", c.combined_radius);
  });
  section(root, "controller", [&](ObjectReader & r) {
    r.number("k_v", c.controller.k_v);
    r.number("k_h", c.controller.k_h);
    r.number("k_d", c.controller.k_d);
    r.number("v_des", c.controller.v_des);
  });
  section(root, "scenario", [&](ObjectReader & r) {
    r.number("radius_min", c.scenario.radius_min);
    r.number("obstacle_speed_max", c.scenario.obstacle_speed_max);
    r.number("course_length", c.scenario.course_length);
    r.number("corridor_width", c.scenario.corridor_width);
    r.number("duration", c.scenario.duration);
    r.number("initial_speed", c.scenario.initial_speed);
    r.number("min_spawn_distance", c.scenario.min_spawn_distance);
    r.number("goal_radius", c.goal_radius);
  });
  section(root, "experiment", [&](ObjectReader & r) {
    r.array("methods", c.experiment.methods, [](const json & e) { return e.is_string(); }, "strings");
    r.array(
      "obstacle_counts", c.experiment.obstacle_counts,
      [](const json & e) { return e.is_number_unsigned(); }, "non-negative integers");
    r.array("radius_caps", c.experiment.radius_caps, [](const json & e) { return e.is_number(); }, "numbers");
    r.integer("trials_per_cell", c.experiment.trials_per_cell);
    r.integer("master_seed", c.experiment.master_seed);
    r.integer("jobs", c.experiment.jobs);
    r.boolean("dt_weighted_cost", c.dt_weighted_cost);
  });
  section(root, "region", [&](ObjectReader & r) {
    r.number("k_lambda_min", c.region.k_lambda_min);
    r.number("k_lambda_max", c.region.k_lambda_max);
    r.integer("n_k_lambda", c.region.n_k_lambda);
    r.number("k_mu_min", c.region.k_mu_min);
    r.number("k_mu_max", c.region.k_mu_max);
    r.integer("n_k_mu", c.region.n_k_mu);
  });
  section(root, "verify", [&](ObjectReader & r) {
    r.integer("samples", c.verify.samples);
    r.integer("seed", c.verify.seed);
    std::string drift = drift_name(c.verify.drift);
    r.string("drift", drift);
    c.verify.drift = parse_drift(drift);
    r.integer("batch_size", c.verify.batch_size);
  });
  root.string("output_dir", c.output_dir);
  root.finish();
  return c;
}

json config_to_json(const Config & c)
{
  json j;
  j["schema_version"] = c.schema_version;
  j["limits"] = {
    {"a_max", c.limits.a_max},
    {"beta_max", c.limits.beta_max},
    {"v_min", c.limits.v_min},
    {"v_max", c.limits.v_max},
    {"l_r", c.limits.l_r},
    {"sensing_range", c.limits.sensing_range},
    {"safety_buffer_s", c.limits.safety_buffer_s},
  };
  j["dpcbf"] = {{"k_lambda", c.dpcbf.k_lambda}, {"k_mu", c.dpcbf.k_mu}, {"gamma", c.dpcbf.gamma}};
  j["c3bf"] = {{"gamma", c.c3bf_gamma}};
  j["dt"] = c.dt;
  j["robot_radius"] = c.robot_radius;
  j["vrel_floor"] = c.vrel_floor;
  j["bounds"] = {
    {"v_obs_max", c.bounds.v_obs_max},
    {"s_bar", c.bounds.s_bar},
    {"vrel_max_rule", rule_name(c.bounds.vrel_rule)},
    {"vrel_max", c.bounds.vrel_max},
    {"combined_radius", c.combined_radius},
  };
  j["controller"] = {
    {"k_v", c.controller.k_v}, {"k_h", c.controller.k_h}, {"k_d", c.controller.k_d}, {"v_des", c.controller.v_des}};
  j["scenario"] = {
    {"radius_min", c.scenario.radius_min},
    {"obstacle_speed_max", c.scenario.obstacle_speed_max},
    {"course_length", c.scenario.course_length},
    {"corridor_width", c.scenario.corridor_width},
    {"duration", c.scenario.duration},
    {"initial_speed", c.scenario.initial_speed},
    {"min_spawn_distance", c.scenario.min_spawn_distance},
    {"goal_radius", c.goal_radius},
  };
  j["experiment"] = {
    {"methods", c.experiment.methods},
    {"obstacle_counts", c.experiment.obstacle_counts},
    {"radius_caps", c.experiment.radius_caps},
    {"trials_per_cell", c.experiment.trials_per_cell},
    {"master_seed", c.experiment.master_seed},
    {"jobs", c.experiment.jobs},
    {"dt_weighted_cost", c.dt_weighted_cost},
  };
  j["region"] = {
    {"k_lambda_min", c.region.k_lambda_min},
    {"k_lambda_max", c.region.k_lambda_max},
    {"n_k_lambda", c.region.n_k_lambda},
    {"k_mu_min", c.region.k_mu_min},
    {"k_mu_max", c.region.k_mu_max},
    {"n_k_mu", c.region.n_k_mu},
  };
  j["verify"] = {
    {"samples", c.verify.samples},
    {"seed", c.verify.seed},
    {"drift", drift_name(c.verify.drift)},
    {"batch_size", c.verify.batch_size},
  };
  j["output_dir"] = c.output_dir;
  return j;
}

Config load_config(const std::filesystem::path & path, Config base)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  Config c = config_from_json(doc, std::move(base));
  c.validate();
  return c;
}

}  // namespace dpcbf
