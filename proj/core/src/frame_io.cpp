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

#include "vipguide/frame_io.hpp"

#include <iterator>
#include <utility>

#include "vipguide/errors.hpp"

namespace vipguide::perception
{

std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path & path, std::string_view bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

FrameStreamWriter::FrameStreamWriter(std::filesystem::path dir) : dir_(std::move(dir))
{
  std::filesystem::create_directories(dir_);
  records_.open(dir_ / kFramesFile, std::ios::binary | std::ios::trunc);
  if (!records_) {
    throw Error("cannot write " + (dir_ / kFramesFile).string());
  }
}

void FrameStreamWriter::write(const PerceptionFrame & frame)
{
  if (last_id_ && frame.frame_id <= *last_id_) {
    throw ConsistencyError(
      "frame_id " + std::to_string(frame.frame_id) + " does not follow " +
      std::to_string(*last_id_));
  }
  const auto encoded = encode_frame(frame);
  write_file(dir_ / depth_file_name(frame.frame_id), encoded.depth_sidecar);
  records_ << encoded.record << '\n';
  records_.flush();
  last_id_ = frame.frame_id;
}

FrameStreamReader::FrameStreamReader(std::filesystem::path dir) : dir_(std::move(dir))
{
  records_.open(dir_ / kFramesFile, std::ios::binary);
  if (!records_) {
    throw Error("cannot open " + (dir_ / kFramesFile).string());
  }
}

std::optional<EncodedFrame> FrameStreamReader::next_encoded()
{
  std::string line;
  while (std::getline(records_, line)) {
    ++line_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const std::filesystem::path sidecar = record_depth_file(line);
    if (sidecar.empty() || sidecar.has_parent_path() || sidecar.is_absolute()) {
      throw DecodeError("depth_file", "must be a plain file name");
    }
    return EncodedFrame{std::move(line), read_file(dir_ / sidecar)};
  }
  return std::nullopt;
}

void FrameStreamReader::check_order(const PerceptionFrame & frame)
{
  if (last_id_ && frame.frame_id <= *last_id_) {
    throw ConsistencyError(
      "line " + std::to_string(line_) + ": frame_id " + std::to_string(frame.frame_id) +
      " does not follow " + std::to_string(*last_id_));
  }
  last_id_ = frame.frame_id;
}

}  // namespace vipguide::perception
