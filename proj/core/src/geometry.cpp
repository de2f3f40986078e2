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

#include "vipguide/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vipguide/errors.hpp"

namespace vipguide::geometry
{
namespace
{

std::string fmt(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

void require(bool ok, const char * field, const std::string & what)
{
  if (!ok) {
    throw ConfigError(std::string("geometry.") + field + ": " + what);
  }
}

double half_fov_tan(double f_deg) { return std::tan(deg_to_rad(f_deg) / 2.0); }

}  // namespace

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

void validate(const GeometricConfig & cfg)
{
  require(cfg.f_deg > 0.0 && cfg.f_deg < 180.0, "f_deg", "must lie in (0, 180)");
  require(cfg.hfov_deg > 0.0 && cfg.hfov_deg < 180.0, "hfov_deg", "must lie in (0, 180)");
  require(cfg.h_vip_m > 0.0, "h_vip_m", "must be positive");
  require(cfg.h_max_m >= cfg.h_vip_m, "h_max_m", "must be >= h_vip_m");
  require(cfg.d_min_floor_m >= 1.0, "d_min_floor_m", "must be >= 1 m");
  require(cfg.d_max_ceiling_m <= 10.0, "d_max_ceiling_m", "must be <= 10 m");
  require(cfg.d_min_floor_m <= cfg.d_max_ceiling_m, "d_min_floor_m", "must be <= d_max_ceiling_m");
  require(cfg.walk_speed_mps >= 0.0, "walk_speed_mps", "must be >= 0");
  require(cfg.t_detect_s >= 0.0, "t_detect_s", "must be >= 0");
  require(cfg.t_react_s >= 0.0, "t_react_s", "must be >= 0");
  require(cfg.buffer_factor >= 0.0, "buffer_factor", "must be >= 0");
  require(cfg.perception_range_m > 0.0, "perception_range_m", "must be positive");
  require(
    cfg.visible_fraction > 0.0 && cfg.visible_fraction <= 1.0, "visible_fraction",
    "must lie in (0, 1]");
}

double visibility_offset(double f_deg, double d_m)
{
  if (!(f_deg > 0.0 && f_deg < 180.0)) {
    throw DomainError("visibility_offset: field of view must lie in (0, 180) degrees");
  }
  if (!(d_m > 0.0)) {
    throw DomainError("visibility_offset: distance must be positive");
  }
  return d_m * half_fov_tan(f_deg);
}

double safety_distance(double speed_mps, double t_detect_s, double t_react_s)
{
  if (!(speed_mps >= 0.0 && t_detect_s >= 0.0 && t_react_s >= 0.0)) {
    throw DomainError("safety_distance: inputs must be non-negative");
  }
  return speed_mps * (t_detect_s + t_react_s);
}

double lookahead(double d_m, double safety_m, double buffer_factor)
{
  return d_m + safety_m + buffer_factor * safety_m;
}

double min_distance_for_visibility(double h_offset_m, const GeometricConfig & cfg)
{
  // Camera axis horizontal: the VIP spans from h_offset below the camera (head
  // top) to h_offset + fraction * h_vip (lowest visible point).
  const double drop = h_offset_m + cfg.visible_fraction * cfg.h_vip_m;
  return std::max(cfg.d_min_floor_m, drop / half_fov_tan(cfg.f_deg));
}

PoseEnvelope pose_envelope(const GeometricConfig & cfg)
{
  validate(cfg);
  const double safety = safety_distance(cfg.walk_speed_mps, cfg.t_detect_s, cfg.t_react_s);
  const double d_min = min_distance_for_visibility(cfg.h_max_m, cfg);
  const double reach = cfg.perception_range_m - safety - cfg.buffer_factor * safety;
  const double d_max = std::min(cfg.d_max_ceiling_m, reach);
  if (d_min > d_max) {
    throw ConfigError(
      "infeasible pose envelope: d_min " + fmt(d_min) + " m exceeds d_max " + fmt(d_max) + " m");
  }
  return PoseEnvelope{cfg.h_max_m, d_min, cfg.h_vip_m, d_max};
}

std::vector<Violation> validate_pose(double h_offset_m, double d_m, const GeometricConfig & cfg)
{
  std::vector<Violation> out;
  double lo = cfg.d_min_floor_m;
  double hi = cfg.d_max_ceiling_m;
  try {
    const auto env = pose_envelope(cfg);
    lo = env.d_min();
    hi = env.d_max();
  } catch (const ConfigError & e) {
    out.push_back({ViolationKind::envelope_infeasible, e.what()});
  }

  // Slack of a few ulps so envelope endpoints computed from the same formula pass.
  const double tan_half = half_fov_tan(cfg.f_deg);
  if (!(d_m > 0.0) || h_offset_m > d_m * tan_half * (1.0 + 1e-12)) {
    out.push_back(
      {ViolationKind::head_not_visible,
       "head not visible: h'/d = " + fmt(h_offset_m / d_m) + " exceeds tan(f/2) = " +
         fmt(tan_half)});
  }
  if (d_m < cfg.d_min_floor_m) {
    out.push_back({ViolationKind::below_floor, "d below " + fmt(cfg.d_min_floor_m) + " m floor"});
  } else if (d_m < lo * (1.0 - 1e-12)) {
    out.push_back({ViolationKind::below_envelope, "d below envelope minimum " + fmt(lo) + " m"});
  }
  if (d_m > cfg.d_max_ceiling_m) {
    out.push_back(
      {ViolationKind::above_ceiling, "d above " + fmt(cfg.d_max_ceiling_m) + " m ceiling"});
  } else if (d_m > hi * (1.0 + 1e-12)) {
    out.push_back({ViolationKind::above_envelope, "d above envelope maximum " + fmt(hi) + " m"});
  }
  if (h_offset_m < cfg.h_vip_m) {
    out.push_back(
      {ViolationKind::offset_below_vip_height, "h' below VIP height " + fmt(cfg.h_vip_m) + " m"});
  }
  if (h_offset_m > cfg.h_max_m) {
    out.push_back({ViolationKind::offset_above_max, "h' above h_max " + fmt(cfg.h_max_m) + " m"});
  }
  return out;
}

}  // namespace vipguide::geometry
