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

#ifndef VIPGUIDE__CALIBRATION_HPP_
#define VIPGUIDE__CALIBRATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vipguide/perception.hpp"

namespace vipguide::calibration
{

/// One ground-truth pair: normalized REV in [0, 1] and measured distance.
struct CalibrationSample
{
  double rev = 0.0;
  double distance_m = 0.0;
};

/// distance = a * rev^2 + b * rev + c, clamped below at zero.
struct CalibrationModel
{
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rmse = 0.0;
  std::size_t n_samples = 0;
};

/// Ordinary least squares on the [rev^2, rev, 1] design matrix via a
/// column-pivoted Householder QR. Throws RankDeficiencyError when fewer than
/// three distinct rev values are present and DomainError on invalid samples.
CalibrationModel fit(std::span<const CalibrationSample> samples);

/// Throws DomainError when rev lies outside [0, 1].
double predict(const CalibrationModel & model, double rev);

/// Root mean square of predict - distance. Throws DomainError on empty input.
double rmse(const CalibrationModel & model, std::span<const CalibrationSample> samples);

/// Median REV inside the detection box, restricted to its instance mask when
/// one exists (vip_mask for the VIP, instance_masks[track_id] otherwise).
/// Even counts take the lower middle value. Throws DomainError when the region is empty.
std::uint16_t representative_rev(
  const perception::PerceptionFrame & frame, const perception::Detection & det,
  const perception::BitGrid * mask = nullptr);

/// predict(model, representative_rev / 65535).
double detection_distance(
  const perception::PerceptionFrame & frame, const perception::Detection & det,
  const CalibrationModel & model, const perception::BitGrid * mask = nullptr);

/// CSV with header `rev,distance_m`.
std::vector<CalibrationSample> parse_samples_csv(std::string_view text);
std::string samples_to_csv(std::span<const CalibrationSample> samples);

/// `{"a":..,"b":..,"c":..,"rmse":..,"n_samples":..}`
std::string model_to_json(const CalibrationModel & model);
CalibrationModel model_from_json(std::string_view text);

}  // namespace vipguide::calibration

#endif  // VIPGUIDE__CALIBRATION_HPP_
