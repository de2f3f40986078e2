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

#include "vipguide/calibration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vipguide/errors.hpp"

namespace vipguide::calibration
{
namespace
{

using perception::BitGrid;
using perception::Detection;
using perception::PerceptionFrame;

const BitGrid * lookup_mask(
  const PerceptionFrame & frame, const Detection & det, const BitGrid * explicit_mask,
  BitGrid & storage)
{
  if (explicit_mask != nullptr) {
    return explicit_mask;
  }
  const perception::BitMask * rle = nullptr;
  if (det.is_vip()) {
    if (frame.vip_mask) {
      rle = &*frame.vip_mask;
    }
  } else if (det.track_id) {
    if (auto it = frame.instance_masks.find(*det.track_id); it != frame.instance_masks.end()) {
      rle = &it->second;
    }
  }
  if (rle == nullptr) {
    return nullptr;
  }
  storage = perception::rle_decode(*rle);
  return &storage;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view field, std::size_t line)
{
  field = trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw DecodeError(
      "line " + std::to_string(line), "'" + std::string(field) + "' is not a number");
  }
  return value;
}

}  // namespace

CalibrationModel fit(std::span<const CalibrationSample> samples)
{
  std::set<double> distinct;
  for (const auto & s : samples) {
    if (!(s.rev >= 0.0 && s.rev <= 1.0)) {
      throw DomainError("calibration sample rev outside [0, 1]");
    }
    if (!(s.distance_m > 0.0) || !std::isfinite(s.distance_m)) {
      throw DomainError("calibration sample distance must be positive");
    }
    distinct.insert(s.rev);
  }
  if (distinct.size() < 3) {
    throw RankDeficiencyError(
      "quadratic fit needs at least 3 distinct rev values, got " + std::to_string(distinct.size()));
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = samples[static_cast<std::size_t>(i)].rev;
    design(i, 0) = r * r;
    design(i, 1) = r;
    design(i, 2) = 1.0;
    target(i) = samples[static_cast<std::size_t>(i)].distance_m;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) {
    throw RankDeficiencyError("quadratic design matrix is numerically rank deficient");
  }
  const Eigen::Vector3d coef = qr.solve(target);

  CalibrationModel model{coef(0), coef(1), coef(2), 0.0, samples.size()};
  model.rmse = rmse(model, samples);
  return model;
}

double predict(const CalibrationModel & model, double rev)
{
  if (!(rev >= 0.0 && rev <= 1.0)) {
    throw DomainError("predict: rev outside [0, 1]");
  }
  return std::max(0.0, (model.a * rev + model.b) * rev + model.c);
}

double rmse(const CalibrationModel & model, std::span<const CalibrationSample> samples)
{
  if (samples.empty()) {
    throw DomainError("rmse of an empty sample set");
  }
  double sum = 0.0;
  for (const auto & s : samples) {
    const double e = predict(model, s.rev) - s.distance_m;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

std::uint16_t representative_rev(
  const PerceptionFrame & frame, const Detection & det, const BitGrid * mask)
{
  if (!perception::is_valid(det.bbox, frame.depth.width, frame.depth.height)) {
    throw DomainError("detection box outside the depth map");
  }
  BitGrid storage;
  const BitGrid * region = lookup_mask(frame, det, mask, storage);

  std::vector<std::uint16_t> values;
  values.reserve(static_cast<std::size_t>(det.bbox.area()));
  for (int y = det.bbox.y1; y < det.bbox.y2; ++y) {
    for (int x = det.bbox.x1; x < det.bbox.x2; ++x) {
      if (region == nullptr || region->at(x, y)) {
        values.push_back(frame.depth.at(x, y));
      }
    }
  }
  if (values.empty()) {
    throw DomainError("detection region is empty after mask intersection");
  }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

double detection_distance(
  const PerceptionFrame & frame, const Detection & det, const CalibrationModel & model,
  const BitGrid * mask)
{
  return predict(model, representative_rev(frame, det, mask) / 65535.0);
}

std::vector<CalibrationSample> parse_samples_csv(std::string_view text)
{
  std::vector<CalibrationSample> samples;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty()) {
      continue;
    }
    if (!header_seen) {
      if (line != "rev,distance_m") {
        throw DecodeError("header", "expected 'rev,distance_m'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw DecodeError("line " + std::to_string(line_no), "expected two comma-separated fields");
    }
    samples.push_back(
      {parse_number(line.substr(0, comma), line_no), parse_number(line.substr(comma + 1), line_no)});
  }
  if (!header_seen) {
    throw DecodeError("header", "empty samples file");
  }
  return samples;
}

std::string samples_to_csv(std::span<const CalibrationSample> samples)
{
  std::ostringstream os;
  os.precision(17);
  os << "rev,distance_m\n";
  for (const auto & s : samples) {
    os << s.rev << ',' << s.distance_m << '\n';
  }
  return os.str();
}

std::string model_to_json(const CalibrationModel & model)
{
  nlohmann::ordered_json j;
  j["a"] = model.a;
  j["b"] = model.b;
  j["c"] = model.c;
  j["rmse"] = model.rmse;
  j["n_samples"] = model.n_samples;
  return j.dump();
}

CalibrationModel model_from_json(std::string_view text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception & e) {
    throw DecodeError("model", e.what());
  }
  if (!j.is_object()) {
    throw DecodeError("model", "expected a JSON object");
  }
  CalibrationModel model;
  for (auto [key, slot] : {std::pair{"a", &model.a}, {"b", &model.b}, {"c", &model.c}, {"rmse", &model.rmse}}) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) {
      throw DecodeError(key, "missing or not a number");
    }
    *slot = it->get<double>();
  }
  auto it = j.find("n_samples");
  if (it == j.end() || !it->is_number_unsigned()) {
    throw DecodeError("n_samples", "missing or not a non-negative integer");
  }
  model.n_samples = it->get<std::size_t>();
  if (model.n_samples < 3) {
    throw DecodeError("n_samples", "a fitted model has at least 3 samples");
  }
  if (model.rmse < 0.0) {
    throw DecodeError("rmse", "must be non-negative");
  }
  return model;
}

}  // namespace vipguide::calibration
