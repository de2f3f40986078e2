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

#include "vipguide/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/frame_io.hpp"
#include "vipguide/geometry.hpp"

namespace vipguide::sim
{
namespace
{

constexpr double kMinAheadM = 0.5;

double positive_mod(double value, double period)
{
  const double r = std::fmod(value, period);
  return r < 0.0 ? r + period : r;
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

double Camera::fx() const { return (width / 2.0) / std::tan(geometry::deg_to_rad(hfov_deg) / 2.0); }
double Camera::fy() const { return (height / 2.0) / std::tan(geometry::deg_to_rad(vfov_deg) / 2.0); }

double RevLaw::normalized(double z) const
{
  if (kind == RevLawKind::inverse_depth) {
    return z <= 0.0 ? 1.0 : std::clamp(z_near / z, 0.0, 1.0);
  }
  if (z <= z_near) {
    return 1.0;
  }
  if (z >= z_far) {
    return 0.0;
  }
  return 1.0 - std::sqrt((z - z_near) / (z_far - z_near));
}

std::optional<BoundingBox> project_bbox(const SceneObject & object, const Camera & camera)
{
  if (!(object.z > 0.0)) {
    return std::nullopt;
  }
  const double u_centre = camera.cx() + camera.fx() * object.x / object.z;
  const double v_bottom = camera.cy() + camera.fy() * object.y / object.z;
  const double w_px = camera.fx() * object.w / object.z;
  const double h_px = camera.fy() * object.h / object.z;
  // Keep the unclipped extent representable before rounding.
  if (!(std::abs(u_centre) + w_px < 1e8 && std::abs(v_bottom) + h_px < 1e8)) {
    return std::nullopt;
  }
  const int width_px = round_half_up(w_px);
  const int height_px = round_half_up(h_px);
  BoundingBox box;
  box.x1 = round_half_up(u_centre - width_px / 2.0);
  box.x2 = box.x1 + width_px;
  box.y2 = round_half_up(v_bottom);
  box.y1 = box.y2 - height_px;
  box.x1 = std::clamp(box.x1, 0, camera.width);
  box.x2 = std::clamp(box.x2, 0, camera.width);
  box.y1 = std::clamp(box.y1, 0, camera.height);
  box.y2 = std::clamp(box.y2, 0, camera.height);
  if (box.x1 >= box.x2 || box.y1 >= box.y2) {
    return std::nullopt;
  }
  return box;
}

std::optional<double> ground_distance(int row, const Camera & camera)
{
  const double below = (row + 0.5) - camera.cy();
  if (below <= 0.0) {
    return std::nullopt;
  }
  return camera.mount_height_m * camera.fy() / below;
}

RenderResult render_scene(std::span<const SceneObject> objects, const Camera & camera, const RevLaw & law)
{
  RenderResult out{DepthMap(camera.width, camera.height), std::vector<int>(
    static_cast<std::size_t>(camera.width) * camera.height, -1)};
  for (int y = 0; y < camera.height; ++y) {
    const auto z = ground_distance(y, camera);
    const std::uint16_t rev = z ? law.rev(*z) : 0;
    std::fill_n(out.depth.values.begin() + static_cast<std::ptrdiff_t>(y) * camera.width, camera.width, rev);
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].z > 0.0) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return objects[a].z > objects[b].z;
  });
  for (auto i : order) {
    const auto box = project_bbox(objects[i], camera);
    if (!box) {
      continue;
    }
    const std::uint16_t rev = law.rev(objects[i].z);
    for (int y = box->y1; y < box->y2; ++y) {
      for (int x = box->x1; x < box->x2; ++x) {
        out.depth.at(x, y) = rev;
        out.owner[static_cast<std::size_t>(y) * camera.width + x] = static_cast<int>(i);
      }
    }
  }
  return out;
}

DepthMap render_depth(std::span<const SceneObject> objects, const Camera & camera, const RevLaw & law)
{
  return render_scene(objects, camera, law).depth;
}

std::string_view to_string(ScenarioKind kind)
{
  switch (kind) {
    case ScenarioKind::footpath_tree:
      return "footpath_tree";
    case ScenarioKind::parked_vehicles:
      return "parked_vehicles";
    case ScenarioKind::crowded_street:
      return "crowded_street";
    case ScenarioKind::random:
      return "random";
  }
  return "random";
}

ScenarioKind parse_scenario_kind(std::string_view name)
{
  for (auto kind : {ScenarioKind::footpath_tree, ScenarioKind::parked_vehicles,
                    ScenarioKind::crowded_street, ScenarioKind::random}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw DomainError("unknown scenario '" + std::string(name) + "'");
}

ScenarioGenerator::ScenarioGenerator(ScenarioSpec spec) : spec_(std::move(spec))
{
  if (spec_.n_frames < 1) {
    throw DomainError("scenario needs at least one frame");
  }
  if (spec_.camera.width <= 0 || spec_.camera.height <= 0 || !(spec_.fps > 0.0)) {
    throw DomainError("scenario camera dimensions and fps must be positive");
  }

  std::mt19937_64 rng(spec_.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(spec_.kind));
  noise_rng_.seed(spec_.seed ^ 0xD1B54A32D192ED03ULL);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  vip_sway_phase_ = uniform(0.0, 2.0 * std::numbers::pi);

  switch (spec_.kind) {
    case ScenarioKind::footpath_tree: {
      // Tree canopies overhanging the footpath from the left, plus a low
      // hedge along the left margin. Neither is a detector class.
      walkway_half_width_m_ = 1.5;
      const double period = 8.0;
      const double first = uniform(0.5, 1.5);
      for (int k = 0; k < 2; ++k) {
        world_.push_back({"tree", -0.5 + uniform(-0.1, 0.1), first + 4.0 * k, period,
                          1.6 + uniform(-0.1, 0.1), 4.5 + uniform(-0.3, 0.3), 0.0, false});
      }
      for (int k = 0; k < 8; ++k) {
        world_.push_back({"wall", -2.0 + uniform(-0.05, 0.05), kMinAheadM + k * 1.0 + uniform(0.0, 0.2),
                          period, 0.5, 1.2, 0.0, false});
      }
      expected_partition_ = 2;
      break;
    }
    case ScenarioKind::parked_vehicles: {
      // Cars parked nose to tail ahead-left of the VIP, with a low kerb wall
      // on the street side.
      walkway_half_width_m_ = 2.5;
      const double spacing = 1.5;
      const int count = 8;
      const double offset = uniform(0.0, spacing);
      for (int k = 0; k < count; ++k) {
        world_.push_back({"car", -0.9 + uniform(-0.05, 0.05), k * spacing + offset, spacing * count,
                          1.8 + uniform(-0.1, 0.1), 1.5 + uniform(-0.05, 0.1), 0.0, true});
      }
      for (int k = 0; k < 12; ++k) {
        world_.push_back({"wall", -2.6 + uniform(-0.05, 0.05), k * 1.0 + uniform(0.0, 0.2), 12.0,
                          0.5, 0.8, 0.0, false});
      }
      expected_partition_ = 2;
      break;
    }
    case ScenarioKind::crowded_street: {
      // Staggered rows of pedestrians filling the walkway ahead and to the right.
      walkway_half_width_m_ = 2.5;
      const double row_spacing = 0.8;
      const int rows = 4;
      const double offset = uniform(0.0, row_spacing);
      for (int r = 0; r < rows; ++r) {
        const double x0 = -1.0 + (r % 2 == 0 ? 0.0 : 0.35);
        for (int j = 0; j < 6; ++j) {
          world_.push_back({"person", x0 + 0.7 * j + uniform(-0.05, 0.05),
                            r * row_spacing + offset + uniform(-0.1, 0.1), row_spacing * rows,
                            0.5 + uniform(-0.05, 0.05), uniform(1.6, 1.85), 0.0, true});
        }
      }
      expected_partition_ = 0;
      break;
    }
    case ScenarioKind::random: {
      walkway_half_width_m_ = uniform(1.0, 3.0);
      static constexpr const char * kKinds[] = {"person", "car", "bicycle", "tree", "wall"};
      const int count = std::uniform_int_distribution<int>(3, 10)(rng);
      for (int k = 0; k < count; ++k) {
        const char * kind = kKinds[std::uniform_int_distribution<int>(0, 4)(rng)];
        const bool labeled = std::string_view(kind) != "tree" && std::string_view(kind) != "wall";
        world_.push_back({kind, uniform(-3.0, 3.0), uniform(0.0, 12.0), 12.0, uniform(0.4, 2.0),
                          uniform(0.8, 3.0), 0.0, labeled});
      }
      break;
    }
  }
}

std::optional<SimFrame> ScenarioGenerator::next()
{
  if (index_ >= spec_.n_frames) {
    return std::nullopt;
  }
  return make_frame(index_++);
}

SimFrame ScenarioGenerator::make_frame(int index)
{
  const Camera & cam = spec_.camera;
  const double t = index / spec_.fps;
  const double travelled = spec_.walk_speed_mps * t;

  // Index 0 is the VIP; world objects follow in declaration order.
  std::vector<SceneObject> objects;
  objects.push_back({"vip", 0.1 * std::sin(2.0 * std::numbers::pi * t / 2.0 + vip_sway_phase_),
                     cam.mount_height_m, spec_.vip_standoff_m, 0.5, spec_.vip_height_m, true});
  for (const auto & w : world_) {
    const double ahead = kMinAheadM + positive_mod(w.ahead0 - kMinAheadM - travelled, w.period);
    objects.push_back({w.kind, w.x, cam.mount_height_m - w.elevation, spec_.vip_standoff_m + ahead,
                       w.w, w.h, w.labeled});
  }

  const auto render = render_scene(objects, cam, spec_.law);

  SimFrame out;
  auto & frame = out.frame;
  frame.frame_id = index;
  frame.timestamp = t;
  frame.width = cam.width;
  frame.height = cam.height;
  frame.depth = render.depth;
  if (spec_.rev_noise_sigma > 0.0) {
    std::normal_distribution<double> jitter(0.0, spec_.rev_noise_sigma);
    for (auto & v : frame.depth.values) {
      v = static_cast<std::uint16_t>(std::clamp(std::lround(v + jitter(noise_rng_)), 0L, 65535L));
    }
  }

  std::vector<perception::BitGrid> visible(objects.size(), perception::BitGrid(cam.width, cam.height));
  std::vector<bool> any_visible(objects.size(), false);
  perception::BitGrid road(cam.width, cam.height);
  for (int y = 0; y < cam.height; ++y) {
    const auto zg = ground_distance(y, cam);
    for (int x = 0; x < cam.width; ++x) {
      const int owner = render.owner[static_cast<std::size_t>(y) * cam.width + x];
      if (owner >= 0) {
        visible[static_cast<std::size_t>(owner)].set(x, y, true);
        any_visible[static_cast<std::size_t>(owner)] = true;
      } else if (zg) {
        const double lateral = ((x + 0.5) - cam.cx()) * *zg / cam.fx();
        road.set(x, y, std::abs(lateral) <= walkway_half_width_m_);
      }
    }
  }
  frame.road_mask = perception::rle_encode(road);

  std::mt19937_64 conf_rng(spec_.seed * 1000003ULL + static_cast<std::uint64_t>(index));
  std::uniform_real_distribution<double> conf(0.6, 0.95);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto box = project_bbox(objects[i], cam);
    out.truth.objects.push_back({static_cast<std::int64_t>(i), objects[i].kind, objects[i].labeled,
                                 objects[i].z, objects[i].z - spec_.vip_standoff_m, box});
    if (!objects[i].labeled || !box || !any_visible[i]) {
      continue;
    }
    perception::Detection det;
    det.class_label = objects[i].kind;
    det.bbox = *box;
    // Two decimals keep records short and exactly reproducible.
    det.confidence = i == 0 ? 0.95 : std::round(conf(conf_rng) * 100.0) / 100.0;
    det.track_id = static_cast<std::int64_t>(i);
    frame.detections.push_back(det);
    if (i == 0) {
      frame.vip_mask = perception::rle_encode(visible[i]);
    } else {
      frame.instance_masks.emplace(static_cast<std::int64_t>(i), perception::rle_encode(visible[i]));
    }
  }

  out.truth.frame_id = frame.frame_id;
  out.truth.safety_distance_m =
    geometry::safety_distance(spec_.walk_speed_mps, spec_.t_detect_s, spec_.t_react_s);
  out.truth.expected_partition = expected_partition_;
  if (!expected_partition_) {
    out.truth.expected_direction = "none";
  } else {
    out.truth.expected_direction = *expected_partition_ == 0 ? "left" : *expected_partition_ == 2 ? "right" : "center";
  }
  return out;
}

std::vector<SimFrame> generate(const ScenarioSpec & spec)
{
  ScenarioGenerator gen(spec);
  std::vector<SimFrame> frames;
  while (auto f = gen.next()) {
    frames.push_back(std::move(*f));
  }
  return frames;
}

std::string ground_truth_to_json(const GroundTruth & truth)
{
  nlohmann::ordered_json j;
  j["frame_id"] = truth.frame_id;
  j["expected_partition"] = truth.expected_partition ? nlohmann::ordered_json(*truth.expected_partition)
                                                     : nlohmann::ordered_json(nullptr);
  j["expected_direction"] = truth.expected_direction;
  j["safety_distance_m"] = truth.safety_distance_m;
  j["objects"] = nlohmann::ordered_json::array();
  for (const auto & o : truth.objects) {
    nlohmann::ordered_json obj;
    obj["object_id"] = o.object_id;
    obj["kind"] = o.kind;
    obj["labeled"] = o.labeled;
    obj["z_m"] = o.z_m;
    obj["ahead_m"] = o.ahead_m;
    obj["bbox"] = o.bbox ? nlohmann::ordered_json{o.bbox->x1, o.bbox->y1, o.bbox->x2, o.bbox->y2}
                         : nlohmann::ordered_json(nullptr);
    j["objects"].push_back(std::move(obj));
  }
  return j.dump();
}

std::vector<calibration::CalibrationSample> calibration_samples(
  const RevLaw & law, int count, double z_min, double z_max)
{
  if (count < 2 || !(z_min > 0.0) || !(z_max > z_min)) {
    throw DomainError("calibration_samples: need count >= 2 and 0 < z_min < z_max");
  }
  std::vector<calibration::CalibrationSample> out;
  for (int i = 0; i < count; ++i) {
    const double z = z_min + (z_max - z_min) * i / (count - 1);
    out.push_back({law.rev(z) / 65535.0, z});
  }
  return out;
}

void write_dataset(const ScenarioSpec & spec, const std::filesystem::path & dir)
{
  perception::FrameStreamWriter frames(dir);
  std::ofstream truth(dir / "ground_truth.jsonl", std::ios::binary | std::ios::trunc);
  if (!truth) {
    throw Error("cannot write " + (dir / "ground_truth.jsonl").string());
  }
  ScenarioGenerator gen(spec);
  while (auto f = gen.next()) {
    frames.write(f->frame);
    truth << ground_truth_to_json(f->truth) << '\n';
  }
  const auto samples = calibration_samples(spec.law, 64, spec.law.z_near, 10.0);
  perception::write_file(dir / "calibration_samples.csv", calibration::samples_to_csv(samples));
}

}  // namespace vipguide::sim
