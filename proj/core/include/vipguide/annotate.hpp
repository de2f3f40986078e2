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

#ifndef VIPGUIDE__ANNOTATE_HPP_
#define VIPGUIDE__ANNOTATE_HPP_

#include "vipguide/perception.hpp"
#include "vipguide/pipeline.hpp"
#include "vipguide/pnm.hpp"

namespace vipguide::annotate
{

inline constexpr int kLineWidth = 2;

/// Grayscale depth (REV >> 8) overlaid with the decision: heading partition
/// green, danger obstacles red, warning obstacles yellow, VIP blue.
pnm::RgbImage render(const perception::PerceptionFrame & frame, const pipeline::GuidanceDecision & decision);

/// Outline of a box, clipped to the image, `thickness` pixels wide inwards.
void draw_box(
  pnm::RgbImage & image, const perception::BoundingBox & box, std::uint8_t r, std::uint8_t g,
  std::uint8_t b, int thickness = kLineWidth);

}  // namespace vipguide::annotate

#endif  // VIPGUIDE__ANNOTATE_HPP_
