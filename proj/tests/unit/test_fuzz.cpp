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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <string>

#include "json.hpp"
#include "oracles.hpp"
#include "test_support.hpp"
#include "vipguide/config.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/frame_io.hpp"
#include "vipguide/pipeline.hpp"
#include "vipguide/pnm.hpp"
#include "vipguide_cli/cli.hpp"

namespace vipguide
{
namespace
{

std::string mutate(std::string s, std::mt19937_64 & rng)
{
  if (s.empty()) {
    return s;
  }
  auto pos = [&]() { return std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng); };
  static const std::string kInteresting = "{}[]\",:-0123456789enult.e+E\\ \n\x00\xff";
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
      s[pos()] = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
      break;
    case 1:
      s.resize(pos());
      break;
    case 2:
      s.insert(pos(), 1, kInteresting[std::uniform_int_distribution<std::size_t>(0, kInteresting.size() - 1)(rng)]);
      break;
    case 3:
      s.erase(pos(), std::uniform_int_distribution<std::size_t>(1, 8)(rng));
      break;
    default: {
      // swap a digit run for a large or negative number
      const auto p = s.find_first_of("0123456789", pos());
      if (p != std::string::npos) {
        s.replace(p, 1, std::uniform_int_distribution<int>(0, 1)(rng) ? "-7" : "99999999999999999999");
      }
    }
  }
  return s;
}

TEST(Fuzz, MutatedRecordsOnlyThrowLibraryErrors)
{
  std::mt19937_64 rng(4242);
  int accepted = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto frame = oracle::random_frame(rng, i);
    const auto enc = perception::encode_frame(frame);
    auto record = enc.record;
    auto sidecar = enc.depth_sidecar;
    const int rounds = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < rounds; ++k) {
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
        sidecar = mutate(sidecar, rng);
      } else {
        record = mutate(record, rng);
      }
    }
    try {
      const auto decoded = perception::decode_frame(record, sidecar);
      perception::validate(decoded);
      ++accepted;
    } catch (const Error &) {
    } catch (const std::exception & e) {
      FAIL() << "non-library exception: " << e.what() << "\nrecord: " << record;
    }
  }
  // some mutations are benign (whitespace, confidence digits)
  EXPECT_GT(accepted, 0);
}

TEST(Fuzz, MutatedPnmOnlyThrowsLibraryErrors)
{
  std::mt19937_64 rng(77);
  for (int i = 0; i < 3000; ++i) {
    perception::DepthMap d(1 + static_cast<int>(rng() % 16), 1 + static_cast<int>(rng() % 16));
    for (auto & v : d.values) {
      v = static_cast<std::uint16_t>(rng());
    }
    const auto bytes = mutate(mutate(pnm::write_pgm16(d), rng), rng);
    try {
      (void)pnm::read_pgm(bytes);
    } catch (const Error &) {
    } catch (const std::exception & e) {
      FAIL() << "non-library exception: " << e.what();
    }
    pnm::RgbImage img(1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 8));
    try {
      (void)pnm::read_ppm(mutate(pnm::write_ppm(img), rng));
    } catch (const Error &) {
    } catch (const std::exception & e) {
      FAIL() << "non-library exception: " << e.what();
    }
  }
}

TEST(Fuzz, PipelineOnRandomFramesOnlyThrowsLibraryErrors)
{
  auto cfg = pipeline::load_config(test::fixture_path("test_config.json"));
  std::mt19937_64 rng(5);
  pipeline::Pipeline p(cfg);
  int ok = 0;
  for (int i = 0; i < 2000; ++i) {
    try {
      (void)p.process_frame(oracle::random_frame(rng, i + 1));
      ++ok;
    } catch (const Error &) {
    } catch (const std::exception & e) {
      FAIL() << "non-library exception: " << e.what();
    }
  }
  EXPECT_GT(ok, 1000);
}

TEST(Fuzz, CorruptStreamStopsWithCompleteLines)
{
  test::TempDir dir;
  std::ostringstream sink;
  const std::string data = dir.str("data");
  const char * sim_argv[] = {"vipguide", "simulate", "--scenario", "random", "--n-frames", "8", "--out", data.c_str()};
  ASSERT_EQ(cli::run_cli(8, sim_argv, sink, sink), cli::kExitOk);

  // cut line 6 in half
  const auto path = dir.path() / "data" / perception::kFramesFile;
  auto text = perception::read_file(path);
  std::size_t start = 0;
  for (int line = 0; line < 5; ++line) {
    start = text.find('\n', start) + 1;
  }
  const auto end = text.find('\n', start);
  text.erase(start + (end - start) / 2, end - start - (end - start) / 2);
  perception::write_file(path, text);

  const std::string out = dir.str("trace.jsonl");
  const std::string cfg = test::fixture_path("test_config.json");
  const char * plan_argv[] = {"vipguide", "plan", "--frames", data.c_str(), "--config", cfg.c_str(), "--out", out.c_str()};
  std::ostringstream err;
  EXPECT_EQ(cli::run_cli(8, plan_argv, sink, err), cli::kExitFailure);
  EXPECT_NE(err.str().find("line 6"), std::string::npos) << err.str();

  const auto trace = perception::read_file(out);
  ASSERT_FALSE(trace.empty());
  EXPECT_EQ(trace.back(), '\n');
  std::istringstream lines(trace);
  int n = 0;
  for (std::string l; std::getline(lines, l); ++n) {
    EXPECT_NO_THROW((void)nlohmann::json::parse(l));
  }
  EXPECT_EQ(n, 5);
}

}  // namespace
}  // namespace vipguide
