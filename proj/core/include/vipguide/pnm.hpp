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

#ifndef VIPGUIDE__PNM_HPP_
#define VIPGUIDE__PNM_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vipguide/perception.hpp"

namespace vipguide::pnm
{

struct RgbImage
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB triples

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  bool operator==(const RgbImage &) const = default;
};

/// Binary P5, maxval 65535, big-endian samples.
std::string write_pgm16(const perception::DepthMap & depth);

/// Reads P5 with maxval 65535 (16-bit, big-endian) or 255 (8-bit, scaled by 257).
perception::DepthMap read_pgm(std::string_view bytes);

/// Binary P6, maxval 255.
std::string write_ppm(const RgbImage & image);
RgbImage read_ppm(std::string_view bytes);

}  // namespace vipguide::pnm

#endif  // VIPGUIDE__PNM_HPP_
