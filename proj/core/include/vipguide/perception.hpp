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

#ifndef VIPGUIDE__PERCEPTION_HPP_
#define VIPGUIDE__PERCEPTION_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vipguide::perception
{

inline constexpr std::string_view kVipClass = "vip";

/// Pixel rectangle, origin top-left, half-open: columns [x1, x2), rows [y1, y2).
struct BoundingBox
{
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  std::int64_t area() const { return static_cast<std::int64_t>(width()) * height(); }

  bool operator==(const BoundingBox &) const = default;
};

/// True when 0 <= x1 < x2 <= width and 0 <= y1 < y2 <= height.
bool is_valid(const BoundingBox & box, int frame_width, int frame_height);

struct Detection
{
  std::string class_label;
  BoundingBox bbox;
  double confidence = 0.0;
  std::optional<std::int64_t> track_id;

  bool is_vip() const { return class_label == kVipClass; }
  bool operator==(const Detection &) const = default;
};

/// Dense row-major bit image, one byte per pixel (0 or 1).
struct BitGrid
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BitGrid() = default;
  BitGrid(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

  bool operator==(const BitGrid &) const = default;
};

/// Run-length encoded mask. Runs alternate background/foreground in row-major
/// order and always start with a (possibly empty) background run.
struct BitMask
{
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> runs;

  bool operator==(const BitMask &) const = default;
};

/// Canonical encoding: only the leading background run may be zero.
BitMask rle_encode(const BitGrid & grid);

/// Throws ConsistencyError when the runs do not sum to width * height.
BitGrid rle_decode(const BitMask & mask);

/// Number of foreground pixels, without materializing the grid.
std::uint64_t foreground_count(const BitMask & mask);

/// Relative depth map. Larger values are nearer to the camera.
struct DepthMap
{
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;

  DepthMap() = default;
  DepthMap(int w, int h, std::uint16_t fill = 0)
  : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill)
  {
  }

  std::uint16_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t & at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const DepthMap &) const = default;
};

struct PerceptionFrame
{
  std::int64_t frame_id = 0;
  double timestamp = 0.0;
  int width = 0;
  int height = 0;
  std::vector<Detection> detections;
  std::optional<BitMask> vip_mask;
  std::optional<BitMask> road_mask;
  std::map<std::int64_t, BitMask> instance_masks;
  DepthMap depth;

  /// The single "vip" detection, or nullptr.
  const Detection * find_vip() const;

  bool operator==(const PerceptionFrame &) const = default;
};

/// Checks every frame invariant; throws ConsistencyError naming the first violation.
void validate(const PerceptionFrame & frame);

struct EncodedFrame
{
  std::string record;         ///< one JSON object, no trailing newline
  std::string depth_sidecar;  ///< binary PGM bytes
};

/// Sidecar file name referenced by a frame record.
std::string depth_file_name(std::int64_t frame_id);

EncodedFrame encode_frame(const PerceptionFrame & frame);

/// Throws DecodeError for malformed JSON/PGM and ConsistencyError when
/// dimensions or masks disagree with the frame header.
PerceptionFrame decode_frame(std::string_view record, std::string_view depth_sidecar);

/// Reads only the "depth_file" member of a record.
std::string record_depth_file(std::string_view record);

/// round(0.299 R + 0.587 G + 0.114 B) per pixel. Throws DomainError when the
/// length is not a multiple of three.
std::vector<std::uint8_t> luma_convert(std::span<const std::uint8_t> rgb);

/// 8-bit RGB depth rendering -> 16-bit REV map (luma, then x257).
DepthMap depth_from_rgb(std::span<const std::uint8_t> rgb, int width, int height);

}  // namespace vipguide::perception

#endif  // VIPGUIDE__PERCEPTION_HPP_
