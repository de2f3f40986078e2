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

#ifndef VIPGUIDE__SIM_HPP_
#define VIPGUIDE__SIM_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vipguide/calibration.hpp"
#include "vipguide/perception.hpp"

namespace vipguide::sim
{

using perception::BoundingBox;
using perception::DepthMap;

/// Ideal pinhole camera with a horizontal optical axis, mounted
/// `mount_height_m` above a flat ground plane.
struct Camera
{
  double hfov_deg = 80.0;
  double vfov_deg = 64.0;
  int width = 640;
  int height = 480;
  double mount_height_m = 2.5;

  double fx() const;
  double fy() const;
  double cx() const { return width / 2.0; }
  double cy() const { return height / 2.0; }
};

enum class RevLawKind
{
  quadratic_falloff,  ///< rev = 1 - sqrt((z - z_near) / (z_far - z_near))
  inverse_depth,      ///< rev = z_near / z
};

/// Metric depth -> 16-bit relative depth value. Both laws give 65535 at
/// z_near and fall off with distance (larger is nearer).
struct RevLaw
{
  RevLawKind kind = RevLawKind::quadratic_falloff;
  double z_near = 1.0;
  double z_far = 20.0;

  double normalized(double z) const;
  std::uint16_t rev(double z) const { return static_cast<std::uint16_t>(std::lround(65535.0 * normalized(z))); }
};

/// Billboard in camera coordinates: x right, y down, z forward. (x, y) is the
/// centre of the rectangle's bottom edge, so a grounded object has
/// y == camera mount height.
struct SceneObject
{
  std::string kind;
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;
  double w = 1.0;
  double h = 1.0;
  bool labeled = true;
};

/// Perspective footprint, clipped to the frame; nullopt when behind the
/// camera or entirely off-frame. Width is round(fx * w / z) before clipping.
std::optional<BoundingBox> project_bbox(const SceneObject & object, const Camera & camera);

/// Ground-plane distance seen through the centre of image row `row`, or
/// nullopt at and above the horizon.
std::optional<double> ground_distance(int row, const Camera & camera);

struct RenderResult
{
  DepthMap depth;
  std::vector<int> owner;  ///< object index per pixel, -1 for background
};

/// Ground gradient background, then each object's footprint painted
/// farthest-first so the nearest object wins.
RenderResult render_scene(std::span<const SceneObject> objects, const Camera & camera, const RevLaw & law = {});
DepthMap render_depth(std::span<const SceneObject> objects, const Camera & camera, const RevLaw & law = {});

enum class ScenarioKind
{
  footpath_tree,
  parked_vehicles,
  crowded_street,
  random,
};

std::string_view to_string(ScenarioKind kind);
/// Throws DomainError for unknown names.
ScenarioKind parse_scenario_kind(std::string_view name);

struct ScenarioSpec
{
  ScenarioKind kind = ScenarioKind::footpath_tree;
  std::uint64_t seed = 1;
  int n_frames = 30;
  Camera camera;
  double walk_speed_mps = 1.2;
  double fps = 30.0;
  double vip_standoff_m = 4.5;
  double vip_height_m = 1.7;
  RevLaw law;
  double rev_noise_sigma = 0.0;  ///< optional Gaussian jitter on REV, in REV units
  double t_detect_s = 0.161;
  double t_react_s = 1.0;
};

struct ObjectTruth
{
  std::int64_t object_id = 0;
  std::string kind;
  bool labeled = true;
  double z_m = 0.0;
  double ahead_m = 0.0;  ///< z minus the VIP's z
  std::optional<BoundingBox> bbox;
};

struct GroundTruth
{
  std::int64_t frame_id = 0;
  std::optional<int> expected_partition;  ///< for three partitions
  std::string expected_direction;         ///< left, center, right or none
  double safety_distance_m = 0.0;
  std::vector<ObjectTruth> objects;
};

struct SimFrame
{
  perception::PerceptionFrame frame;
  GroundTruth truth;
};

/// Deterministic frame stream for one scenario. Frames are produced lazily.
class ScenarioGenerator
{
public:
  explicit ScenarioGenerator(ScenarioSpec spec);

  std::optional<SimFrame> next();
  const ScenarioSpec & spec() const { return spec_; }

private:
  struct WorldObject
  {
    std::string kind;
    double x;
    double ahead0;
    double period;
    double w;
    double h;
    double elevation;
    bool labeled;
  };

  SimFrame make_frame(int index);

  ScenarioSpec spec_;
  std::vector<WorldObject> world_;
  std::optional<int> expected_partition_;
  double walkway_half_width_m_ = 2.5;
  double vip_sway_phase_ = 0.0;
  std::mt19937_64 noise_rng_;
  int index_ = 0;
};

/// All frames of a scenario at once; prefer ScenarioGenerator for long runs.
std::vector<SimFrame> generate(const ScenarioSpec & spec);

/// `{"frame_id":..,"expected_partition":..,"expected_direction":..,...}`
std::string ground_truth_to_json(const GroundTruth & truth);

/// Exact samples of the REV law for z evenly spaced in [z_min, z_max].
std::vector<calibration::CalibrationSample> calibration_samples(
  const RevLaw & law, int count, double z_min, double z_max);

/// Writes frames.jsonl, the depth sidecars, ground_truth.jsonl and
/// calibration_samples.csv under `dir`.
void write_dataset(const ScenarioSpec & spec, const std::filesystem::path & dir);

}  // namespace vipguide::sim

#endif  // VIPGUIDE__SIM_HPP_
