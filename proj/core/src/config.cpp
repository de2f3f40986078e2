// Copyright 2026 The vipguide Authors
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

#include "vipguide/config.hpp"

#include <functional>
#include <limits>
#include <map>

#include "json.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/frame_io.hpp"

namespace vipguide::pipeline
{
namespace
{

using Json = nlohmann::json;
using Setter = std::function<void(const Json &, const std::string &)>;

double number(const Json & v, const std::string & key)
{
  if (!v.is_number()) {
    throw ConfigError(key + ": expected a number");
  }
  return v.get<double>();
}

int integer(const Json & v, const std::string & key)
{
  if (!v.is_number_integer()) {
    throw ConfigError(key + ": expected an integer");
  }
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(key + ": out of range");
  }
  return static_cast<int>(x);
}

Setter real(double & slot)
{
  return [&slot](const Json & v, const std::string & key) { slot = number(v, key); };
}

Setter whole(int & slot)
{
  return [&slot](const Json & v, const std::string & key) { slot = integer(v, key); };
}

void apply_section(const Json & section, const std::string & name, const std::map<std::string, Setter> & setters)
{
  if (!section.is_object()) {
    throw ConfigError(name + ": expected an object");
  }
  for (const auto & [key, value] : section.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown key " + name + "." + key);
    }
    it->second(value, name + "." + key);
  }
}

std::filesystem::path resolve(const std::filesystem::path & base, const std::string & file)
{
  const std::filesystem::path p(file);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

Config parse_config(std::string_view json_text, const std::filesystem::path & base_dir)
{
  Json j;
  try {
    j = Json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::exception & e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }

  Config cfg;
  auto & g = cfg.geometry;
  auto & p = cfg.planner;
  auto & t = cfg.tracking;
  auto & pl = cfg.pipeline;
  int max_history = static_cast<int>(t.max_history);

  for (const auto & [section, value] : j.items()) {
    if (section == "geometry") {
      apply_section(value, section, {
        {"f_deg", real(g.f_deg)},
        {"hfov_deg", real(g.hfov_deg)},
        {"h_vip_m", real(g.h_vip_m)},
        {"h_max_m", real(g.h_max_m)},
        {"d_min_floor_m", real(g.d_min_floor_m)},
        {"d_max_ceiling_m", real(g.d_max_ceiling_m)},
        {"walk_speed_mps", real(g.walk_speed_mps)},
        {"t_detect_s", real(g.t_detect_s)},
        {"t_react_s", real(g.t_react_s)},
        {"buffer_factor", real(g.buffer_factor)},
        {"perception_range_m", [&g](const Json & v, const std::string & key) {
           // null means unbounded
           g.perception_range_m = v.is_null() ? std::numeric_limits<double>::infinity() : number(v, key);
         }},
        {"visible_fraction", real(g.visible_fraction)},
      });
    } else if (section == "planner") {
      apply_section(value, section, {
        {"n_partitions", whole(p.n_partitions)},
        {"width_margin", real(p.width_margin)},
        {"danger_mult", real(p.danger_mult)},
        {"warning_mult", real(p.warning_mult)},
        {"edge_box_px", whole(p.edge_box_px)},
        {"edge_threshold", whole(p.edge_threshold)},
      });
    } else if (section == "tracking") {
      apply_section(value, section, {
        {"iou_threshold", real(t.iou_threshold)},
        {"max_misses", whole(t.max_misses)},
        {"max_history", whole(max_history)},
      });
    } else if (section == "pipeline") {
      apply_section(value, section, {
        {"vip_lost_frames", whole(pl.vip_lost_frames)},
        {"reroute_hysteresis", whole(pl.reroute_hysteresis)},
        {"rate_window_s", real(pl.rate_window_s)},
        {"live_speed", [&pl](const Json & v, const std::string & key) {
           if (!v.is_boolean()) {
             throw ConfigError(key + ": expected a boolean");
           }
           pl.live_speed = v.get<bool>();
         }},
      });
    } else if (section == "calibration") {
      if (!value.is_object()) {
        throw ConfigError("calibration: expected an object");
      }
      try {
        if (value.contains("model_file")) {
          if (value.size() != 1 || !value["model_file"].is_string()) {
            throw ConfigError("calibration: use either model_file or inline coefficients");
          }
          const auto path = resolve(base_dir, value["model_file"].get<std::string>());
          cfg.calibration = calibration::model_from_json(perception::read_file(path));
        } else {
          cfg.calibration = calibration::model_from_json(value.dump());
        }
      } catch (const ConfigError &) {
        throw;
      } catch (const Error & e) {
        throw ConfigError(std::string("calibration: ") + e.what());
      }
    } else if (section == "route") {
      std::string graph_file;
      apply_section(value, section, {
        {"graph_file", [&graph_file](const Json & v, const std::string & key) {
           if (!v.is_string()) {
             throw ConfigError(key + ": expected a string");
           }
           graph_file = v.get<std::string>();
         }},
        {"src", [&cfg](const Json & v, const std::string & key) {
           if (!v.is_string()) {
             throw ConfigError(key + ": expected a string");
           }
           cfg.route.src = v.get<std::string>();
         }},
        {"dst", [&cfg](const Json & v, const std::string & key) {
           if (!v.is_string()) {
             throw ConfigError(key + ": expected a string");
           }
           cfg.route.dst = v.get<std::string>();
         }},
      });
      if (!graph_file.empty()) {
        try {
          cfg.route.graph = global_planner::load_graph_file(resolve(base_dir, graph_file).string());
        } catch (const Error & e) {
          throw ConfigError(std::string("route.graph_file: ") + e.what());
        }
      }
    } else {
      throw ConfigError("unknown config section '" + section + "'");
    }
  }
  if (max_history < 2) {
    throw ConfigError("tracking.max_history must be >= 2");
  }
  t.max_history = static_cast<std::size_t>(max_history);
  validate(cfg);
  return cfg;
}

Config load_config(const std::filesystem::path & path)
{
  std::string text;
  try {
    text = perception::read_file(path);
  } catch (const Error & e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path());
}

void validate(const Config & config)
{
  geometry::validate(config.geometry);
  const auto & p = config.planner;
  if (p.n_partitions < 1 || p.n_partitions % 2 == 0) {
    throw ConfigError("planner.n_partitions must be a positive odd number");
  }
  if (!(p.width_margin > 0.0)) {
    throw ConfigError("planner.width_margin must be positive");
  }
  if (!(p.danger_mult > 0.0 && p.warning_mult >= p.danger_mult)) {
    throw ConfigError("planner.danger_mult must be positive and <= planner.warning_mult");
  }
  if (p.edge_box_px < 1) {
    throw ConfigError("planner.edge_box_px must be >= 1");
  }
  if (p.edge_threshold < 0 || p.edge_threshold > 255) {
    throw ConfigError("planner.edge_threshold must lie in [0, 255]");
  }
  const auto & t = config.tracking;
  if (!(t.iou_threshold > 0.0 && t.iou_threshold < 1.0)) {
    throw ConfigError("tracking.iou_threshold must lie in (0, 1)");
  }
  if (t.max_misses < 0) {
    throw ConfigError("tracking.max_misses must be >= 0");
  }
  const auto & pl = config.pipeline;
  if (pl.vip_lost_frames < 0 || pl.reroute_hysteresis < 1 || !(pl.rate_window_s > 0.0)) {
    throw ConfigError("pipeline: vip_lost_frames >= 0, reroute_hysteresis >= 1, rate_window_s > 0");
  }
  const auto & r = config.route;
  if (r.graph) {
    if (r.src.empty() || r.dst.empty()) {
      throw ConfigError("route.src and route.dst are required with route.graph_file");
    }
    if (!r.graph->has_node(r.src) || !r.graph->has_node(r.dst)) {
      throw ConfigError("route.src/route.dst are not nodes of the graph");
    }
  }
}

}  // namespace vipguide::pipeline
