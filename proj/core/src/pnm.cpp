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

#include "vipguide/pnm.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "vipguide/errors.hpp"

namespace vipguide::pnm
{
namespace
{

class HeaderReader
{
public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view magic()
  {
    if (bytes_.size() < 2) {
      throw DecodeError("magic", "truncated header");
    }
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  int integer(const char * field)
  {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) {
      throw DecodeError(field, "expected an unsigned integer");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(bytes_.data() + start, bytes_.data() + pos_, value);
    if (ec != std::errc{} || ptr != bytes_.data() + pos_) {
      throw DecodeError(field, "integer out of range");
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset()
  {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw DecodeError("maxval", "missing whitespace before raster");
    }
    return pos_ + 1;
  }

private:
  void skip_space_and_comments()
  {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
          ++pos_;
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string header(std::string_view magic, int width, int height, int maxval)
{
  return std::string(magic) + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n" +
         std::to_string(maxval) + "\n";
}

void check_dims(int width, int height)
{
  if (width <= 0 || height <= 0) {
    throw DecodeError("dimensions", "width and height must be positive");
  }
  if (static_cast<std::int64_t>(width) * height > (std::int64_t{1} << 28)) {
    throw DecodeError("dimensions", "image too large");
  }
}

}  // namespace

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b)
{
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  pixels[i] = r;
  pixels[i + 1] = g;
  pixels[i + 2] = b;
}

std::string write_pgm16(const perception::DepthMap & depth)
{
  std::string out = header("P5", depth.width, depth.height, 65535);
  const std::size_t offset = out.size();
  out.resize(offset + depth.values.size() * 2);
  for (std::size_t i = 0; i < depth.values.size(); ++i) {
    out[offset + 2 * i] = static_cast<char>(depth.values[i] >> 8);
    out[offset + 2 * i + 1] = static_cast<char>(depth.values[i] & 0xff);
  }
  return out;
}

perception::DepthMap read_pgm(std::string_view bytes)
{
  HeaderReader reader(bytes);
  if (reader.magic() != "P5") {
    throw DecodeError("magic", "expected P5");
  }
  const int width = reader.integer("width");
  const int height = reader.integer("height");
  const int maxval = reader.integer("maxval");
  check_dims(width, height);
  if (maxval != 65535 && maxval != 255) {
    throw DecodeError("maxval", "unsupported maxval " + std::to_string(maxval));
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height;
  const std::size_t sample_bytes = maxval == 65535 ? 2 : 1;
  if (bytes.size() - offset != count * sample_bytes) {
    throw DecodeError(
      "raster", "expected " + std::to_string(count * sample_bytes) + " bytes, got " +
                  std::to_string(bytes.size() - offset));
  }
  perception::DepthMap depth(width, height);
  const auto * raw = reinterpret_cast<const unsigned char *>(bytes.data() + offset);
  for (std::size_t i = 0; i < count; ++i) {
    if (sample_bytes == 2) {
      depth.values[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    } else {
      depth.values[i] = static_cast<std::uint16_t>(raw[i] * 257);
    }
  }
  return depth;
}

std::string write_ppm(const RgbImage & image)
{
  std::string out = header("P6", image.width, image.height, 255);
  out.append(reinterpret_cast<const char *>(image.pixels.data()), image.pixels.size());
  return out;
}

RgbImage read_ppm(std::string_view bytes)
{
  HeaderReader reader(bytes);
  if (reader.magic() != "P6") {
    throw DecodeError("magic", "expected P6");
  }
  const int width = reader.integer("width");
  const int height = reader.integer("height");
  const int maxval = reader.integer("maxval");
  check_dims(width, height);
  if (maxval != 255) {
    throw DecodeError("maxval", "only maxval 255 is supported");
  }
  const std::size_t offset = reader.raster_offset();
  RgbImage image(width, height);
  if (bytes.size() - offset != image.pixels.size()) {
    throw DecodeError("raster", "raster size does not match header");
  }
  const auto * raw = reinterpret_cast<const std::uint8_t *>(bytes.data() + offset);
  image.pixels.assign(raw, raw + image.pixels.size());
  return image;
}

}  // namespace vipguide::pnm
