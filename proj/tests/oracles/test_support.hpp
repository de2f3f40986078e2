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

#ifndef VIPGUIDE_TESTS__TEST_SUPPORT_HPP_
#define VIPGUIDE_TESTS__TEST_SUPPORT_HPP_

#include <filesystem>
#include <random>
#include <string>

namespace vipguide::test
{

inline std::string fixture_path(const std::string & name)
{
  return (std::filesystem::path(VIPGUIDE_FIXTURE_DIR) / name).string();
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir
{
public:
  TempDir()
  {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("vipguide_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }
  std::string str(const std::string & child = {}) const { return (path_ / child).string(); }

private:
  std::filesystem::path path_;
};

}  // namespace vipguide::test

#endif  // VIPGUIDE_TESTS__TEST_SUPPORT_HPP_
