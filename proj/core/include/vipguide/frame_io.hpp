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

#ifndef VIPGUIDE__FRAME_IO_HPP_
#define VIPGUIDE__FRAME_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "vipguide/perception.hpp"

namespace vipguide::perception
{

inline constexpr const char * kFramesFile = "frames.jsonl";

std::string read_file(const std::filesystem::path & path);
void write_file(const std::filesystem::path & path, std::string_view bytes);

/// Writes `<dir>/frames.jsonl` plus one `<frame_id>.pgm` sidecar per frame.
class FrameStreamWriter
{
public:
  explicit FrameStreamWriter(std::filesystem::path dir);

  /// Throws ConsistencyError if frame ids do not strictly increase.
  void write(const PerceptionFrame & frame);

private:
  std::filesystem::path dir_;
  std::ofstream records_;
  std::optional<std::int64_t> last_id_;
};

/// Reads a directory produced by FrameStreamWriter, one frame at a time.
class FrameStreamReader
{
public:
  explicit FrameStreamReader(std::filesystem::path dir);

  /// Next record and its sidecar bytes, undecoded. Blank lines are skipped.
  std::optional<EncodedFrame> next_encoded();

  /// Throws ConsistencyError if frame ids do not strictly increase.
  void check_order(const PerceptionFrame & frame);

  std::size_t line_number() const { return line_; }

private:
  std::filesystem::path dir_;
  std::ifstream records_;
  std::size_t line_ = 0;
  std::optional<std::int64_t> last_id_;
};

}  // namespace vipguide::perception

#endif  // VIPGUIDE__FRAME_IO_HPP_
