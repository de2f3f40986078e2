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

#include "vipguide/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/pnm.hpp"

namespace vipguide::perception
{
namespace
{

using Json = nlohmann::ordered_json;

constexpr std::int64_t kMaxPixels = std::int64_t{1} << 28;

std::uint64_t run_sum(const BitMask & mask)
{
  std::uint64_t sum = 0;
  for (auto run : mask.runs) {
    sum += run;
  }
  return sum;
}

Json mask_to_json(const BitMask & mask)
{
  Json j = Json::object();
  j["runs"] = mask.runs;
  return j;
}

const Json & member(const Json & obj, const char * key, const std::string & path)
{
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw DecodeError(path + key, "missing field");
  }
  return *it;
}

std::int64_t as_int64(const Json & value, const std::string & path)
{
  if (!value.is_number_integer()) {
    throw DecodeError(path, "expected an integer");
  }
  if (value.is_number_unsigned() &&
      value.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw DecodeError(path, "integer out of range");
  }
  return value.get<std::int64_t>();
}

int as_int(const Json & value, const std::string & path)
{
  const auto v = as_int64(value, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw DecodeError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

double as_double(const Json & value, const std::string & path)
{
  if (!value.is_number()) {
    throw DecodeError(path, "expected a number");
  }
  return value.get<double>();
}

BitMask mask_from_json(const Json & value, const std::string & path, int width, int height)
{
  if (!value.is_object()) {
    throw DecodeError(path, "expected an object with a runs array");
  }
  const Json & runs = member(value, "runs", path + ".");
  if (!runs.is_array()) {
    throw DecodeError(path + ".runs", "expected an array");
  }
  BitMask mask{width, height, {}};
  mask.runs.reserve(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string item = path + ".runs[" + std::to_string(i) + "]";
    const auto run = as_int64(runs[i], item);
    if (run < 0 || run > std::numeric_limits<std::uint32_t>::max()) {
      throw DecodeError(item, "run length out of range");
    }
    mask.runs.push_back(static_cast<std::uint32_t>(run));
  }
  return mask;
}

void check_mask(const BitMask & mask, const std::string & name, int width, int height)
{
  if (mask.width != width || mask.height != height) {
    throw ConsistencyError(name + " dimensions differ from the frame");
  }
  const auto expected = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  if (run_sum(mask) != expected) {
    throw ConsistencyError(
      name + " runs sum to " + std::to_string(run_sum(mask)) + ", expected " +
      std::to_string(expected));
  }
}

}  // namespace

bool is_valid(const BoundingBox & box, int frame_width, int frame_height)
{
  return 0 <= box.x1 && box.x1 < box.x2 && box.x2 <= frame_width && 0 <= box.y1 &&
         box.y1 < box.y2 && box.y2 <= frame_height;
}

BitMask rle_encode(const BitGrid & grid)
{
  if (grid.width <= 0 || grid.height <= 0) {
    throw DomainError("rle_encode: grid dimensions must be positive");
  }
  BitMask mask{grid.width, grid.height, {}};
  std::uint8_t current = 0;
  std::uint32_t count = 0;
  for (auto bit : grid.bits) {
    const std::uint8_t value = bit ? 1 : 0;
    if (value != current) {
      mask.runs.push_back(count);
      current = value;
      count = 0;
    }
    ++count;
  }
  mask.runs.push_back(count);
  return mask;
}

BitGrid rle_decode(const BitMask & mask)
{
  if (mask.width <= 0 || mask.height <= 0) {
    throw ConsistencyError("rle_decode: mask dimensions must be positive");
  }
  const auto total = static_cast<std::uint64_t>(mask.width) * static_cast<std::uint64_t>(mask.height);
  if (run_sum(mask) != total) {
    throw ConsistencyError(
      "rle_decode: runs sum to " + std::to_string(run_sum(mask)) + ", expected " +
      std::to_string(total));
  }
  BitGrid grid(mask.width, mask.height);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (auto run : mask.runs) {
    std::fill_n(grid.bits.begin() + static_cast<std::ptrdiff_t>(pos), run, value);
    pos += run;
    value ^= 1;
  }
  return grid;
}

std::uint64_t foreground_count(const BitMask & mask)
{
  std::uint64_t count = 0;
  for (std::size_t i = 1; i < mask.runs.size(); i += 2) {
    count += mask.runs[i];
  }
  return count;
}

const Detection * PerceptionFrame::find_vip() const
{
  for (const auto & det : detections) {
    if (det.is_vip()) {
      return &det;
    }
  }
  return nullptr;
}

void validate(const PerceptionFrame & frame)
{
  if (frame.width <= 0 || frame.height <= 0) {
    throw ConsistencyError("frame dimensions must be positive");
  }
  if (static_cast<std::int64_t>(frame.width) * frame.height > kMaxPixels) {
    throw ConsistencyError("frame too large");
  }
  if (!std::isfinite(frame.timestamp)) {
    throw ConsistencyError("timestamp must be finite");
  }
  if (frame.depth.width != frame.width || frame.depth.height != frame.height) {
    throw ConsistencyError(
      "depth map is " + std::to_string(frame.depth.width) + "x" +
      std::to_string(frame.depth.height) + ", frame is " + std::to_string(frame.width) + "x" +
      std::to_string(frame.height));
  }
  if (frame.depth.values.size() != static_cast<std::size_t>(frame.width) * frame.height) {
    throw ConsistencyError("depth value count differs from width * height");
  }
  int vip_count = 0;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    const auto & det = frame.detections[i];
    const std::string name = "detections[" + std::to_string(i) + "]";
    if (!is_valid(det.bbox, frame.width, frame.height)) {
      throw ConsistencyError(name + ".bbox outside frame or empty");
    }
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
      throw ConsistencyError(name + ".confidence outside [0,1]");
    }
    if (det.track_id && *det.track_id < 0) {
      throw ConsistencyError(name + ".track_id is negative");
    }
    vip_count += det.is_vip() ? 1 : 0;
  }
  if (vip_count > 1) {
    throw ConsistencyError("more than one vip detection");
  }
  if (frame.vip_mask) {
    check_mask(*frame.vip_mask, "vip_mask", frame.width, frame.height);
  }
  if (frame.road_mask) {
    check_mask(*frame.road_mask, "road_mask", frame.width, frame.height);
  }
  for (const auto & [id, mask] : frame.instance_masks) {
    if (id < 0) {
      throw ConsistencyError("instance mask key is negative");
    }
    check_mask(mask, "instance_masks[" + std::to_string(id) + "]", frame.width, frame.height);
  }
}

std::string depth_file_name(std::int64_t frame_id)
{
  return std::to_string(frame_id) + ".pgm";
}

EncodedFrame encode_frame(const PerceptionFrame & frame)
{
  Json j = Json::object();
  j["frame_id"] = frame.frame_id;
  j["timestamp"] = frame.timestamp;
  j["width"] = frame.width;
  j["height"] = frame.height;
  Json dets = Json::array();
  for (const auto & det : frame.detections) {
    Json d = Json::object();
    d["class"] = det.class_label;
    d["bbox"] = {det.bbox.x1, det.bbox.y1, det.bbox.x2, det.bbox.y2};
    d["confidence"] = det.confidence;
    d["track_id"] = det.track_id ? Json(*det.track_id) : Json(nullptr);
    dets.push_back(std::move(d));
  }
  j["detections"] = std::move(dets);
  j["vip_mask"] = frame.vip_mask ? mask_to_json(*frame.vip_mask) : Json(nullptr);
  j["road_mask"] = frame.road_mask ? mask_to_json(*frame.road_mask) : Json(nullptr);
  if (!frame.instance_masks.empty()) {
    Json masks = Json::object();
    for (const auto & [id, mask] : frame.instance_masks) {
      masks[std::to_string(id)] = mask_to_json(mask);
    }
    j["instance_masks"] = std::move(masks);
  }
  j["depth_file"] = depth_file_name(frame.frame_id);
  return EncodedFrame{j.dump(), pnm::write_pgm16(frame.depth)};
}

PerceptionFrame decode_frame(std::string_view record, std::string_view depth_sidecar)
{
  Json j;
  try {
    j = Json::parse(record.begin(), record.end());
  } catch (const nlohmann::json::exception & e) {
    throw DecodeError("record", e.what());
  }
  if (!j.is_object()) {
    throw DecodeError("record", "expected a JSON object");
  }

  PerceptionFrame frame;
  frame.frame_id = as_int64(member(j, "frame_id", ""), "frame_id");
  frame.timestamp = as_double(member(j, "timestamp", ""), "timestamp");
  frame.width = as_int(member(j, "width", ""), "width");
  frame.height = as_int(member(j, "height", ""), "height");
  if (frame.width <= 0 || frame.height <= 0) {
    throw DecodeError("width", "frame dimensions must be positive");
  }
  if (static_cast<std::int64_t>(frame.width) * frame.height > kMaxPixels) {
    throw DecodeError("width", "frame too large");
  }

  const Json & dets = member(j, "detections", "");
  if (!dets.is_array()) {
    throw DecodeError("detections", "expected an array");
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string path = "detections[" + std::to_string(i) + "]";
    const Json & d = dets[i];
    if (!d.is_object()) {
      throw DecodeError(path, "expected an object");
    }
    Detection det;
    const Json & label = member(d, "class", path + ".");
    if (!label.is_string()) {
      throw DecodeError(path + ".class", "expected a string");
    }
    det.class_label = label.get<std::string>();
    const Json & bbox = member(d, "bbox", path + ".");
    if (!bbox.is_array() || bbox.size() != 4) {
      throw DecodeError(path + ".bbox", "expected [x1,y1,x2,y2]");
    }
    det.bbox = BoundingBox{
      as_int(bbox[0], path + ".bbox[0]"), as_int(bbox[1], path + ".bbox[1]"),
      as_int(bbox[2], path + ".bbox[2]"), as_int(bbox[3], path + ".bbox[3]")};
    det.confidence = as_double(member(d, "confidence", path + "."), path + ".confidence");
    const Json & track = member(d, "track_id", path + ".");
    if (!track.is_null()) {
      det.track_id = as_int64(track, path + ".track_id");
    }
    frame.detections.push_back(std::move(det));
  }

  for (const char * key : {"vip_mask", "road_mask"}) {
    const Json & m = member(j, key, "");
    if (!m.is_null()) {
      auto mask = mask_from_json(m, key, frame.width, frame.height);
      (std::string_view(key) == "vip_mask" ? frame.vip_mask : frame.road_mask) = std::move(mask);
    }
  }

  if (auto it = j.find("instance_masks"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw DecodeError("instance_masks", "expected an object keyed by track id");
    }
    for (const auto & [key, value] : it->items()) {
      const std::string path = "instance_masks." + key;
      std::int64_t id = -1;
      try {
        std::size_t used = 0;
        id = std::stoll(key, &used);
        if (used != key.size() || std::to_string(id) != key) {
          id = -1;
        }
      } catch (const std::exception &) {
        id = -1;
      }
      if (id < 0) {
        throw DecodeError(path, "key is not a canonical non-negative integer");
      }
      frame.instance_masks.emplace(id, mask_from_json(value, path, frame.width, frame.height));
    }
  }

  if (!member(j, "depth_file", "").is_string()) {
    throw DecodeError("depth_file", "expected a string");
  }

  frame.depth = pnm::read_pgm(depth_sidecar);
  validate(frame);
  return frame;
}

std::string record_depth_file(std::string_view record)
{
  Json j;
  try {
    j = Json::parse(record.begin(), record.end());
  } catch (const nlohmann::json::exception & e) {
    throw DecodeError("record", e.what());
  }
  if (!j.is_object()) {
    throw DecodeError("record", "expected a JSON object");
  }
  const Json & name = member(j, "depth_file", "");
  if (!name.is_string()) {
    throw DecodeError("depth_file", "expected a string");
  }
  return name.get<std::string>();
}

std::vector<std::uint8_t> luma_convert(std::span<const std::uint8_t> rgb)
{
  if (rgb.size() % 3 != 0) {
    throw DomainError("luma_convert: input length is not a multiple of 3");
  }
  std::vector<std::uint8_t> gray(rgb.size() / 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    // Fixed-point form of round(0.299 R + 0.587 G + 0.114 B), half rounds up.
    const std::uint32_t weighted =
      299u * rgb[3 * i] + 587u * rgb[3 * i + 1] + 114u * rgb[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>(std::min<std::uint32_t>(255, (weighted + 500) / 1000));
  }
  return gray;
}

DepthMap depth_from_rgb(std::span<const std::uint8_t> rgb, int width, int height)
{
  if (width <= 0 || height <= 0 ||
      rgb.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
    throw DomainError("depth_from_rgb: buffer size does not match dimensions");
  }
  const auto gray = luma_convert(rgb);
  DepthMap depth(width, height);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    depth.values[i] = static_cast<std::uint16_t>(gray[i] * 257);
  }
  return depth;
}

}  // namespace vipguide::perception
