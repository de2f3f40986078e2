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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vipguide/calibration.hpp"
#include "vipguide/global_planner.hpp"
#include "vipguide/local_planner.hpp"
#include "vipguide/pipeline.hpp"
#include "vipguide/sim.hpp"

namespace
{

using namespace vipguide;  // NOLINT

std::vector<sim::SimFrame> scenario_frames(sim::ScenarioKind kind, int n)
{
  sim::ScenarioSpec spec;
  spec.kind = kind;
  spec.n_frames = n;
  return sim::generate(spec);
}

void BM_ProcessFrame(benchmark::State & state)
{
  const auto frames = scenario_frames(static_cast<sim::ScenarioKind>(state.range(0)), 64);
  pipeline::Config cfg;
  cfg.calibration = calibration::fit(sim::calibration_samples(sim::RevLaw{}, 64, 1.0, 10.0));
  std::int64_t id = 0;
  std::size_t i = 0;
  pipeline::Pipeline p(cfg);
  for (auto _ : state) {
    auto frame = frames[i++ % frames.size()].frame;
    frame.frame_id = id++;
    frame.timestamp = static_cast<double>(frame.frame_id) / 30.0;
    benchmark::DoNotOptimize(p.process_frame(frame));
  }
}
BENCHMARK(BM_ProcessFrame)
  ->Arg(static_cast<int>(sim::ScenarioKind::footpath_tree))
  ->Arg(static_cast<int>(sim::ScenarioKind::crowded_street))
  ->Unit(benchmark::kMicrosecond);

void BM_FreeSpace(benchmark::State & state)
{
  std::mt19937_64 rng(1);
  const int width = 1920;
  std::vector<perception::BoundingBox> boxes;
  std::vector<std::optional<double>> dist;
  for (int k = 0; k < state.range(0); ++k) {
    const int x1 = std::uniform_int_distribution<int>(0, width - 2)(rng);
    boxes.push_back({x1, 0, std::uniform_int_distribution<int>(x1 + 1, width)(rng), 1});
    dist.emplace_back(1.0);
  }
  const auto parts = local_planner::partition_bounds(width, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_planner::free_space(boxes, dist, 2.0, width, parts));
  }
}
BENCHMARK(BM_FreeSpace)->Arg(4)->Arg(32)->Arg(256);

void BM_MeanPartitionDepth(benchmark::State & state)
{
  perception::DepthMap depth(640, 480, 1234);
  perception::BitGrid mask(640, 480);
  const auto parts = local_planner::partition_bounds(640, 3);
  for (auto _ : state) {
    for (const auto & p : parts) {
      benchmark::DoNotOptimize(local_planner::mean_partition_depth(depth, p, &mask));
    }
  }
}
BENCHMARK(BM_MeanPartitionDepth)->Unit(benchmark::kMicrosecond);

void BM_ShortestPath(benchmark::State & state)
{
  // square grid with unit weights
  const int side = static_cast<int>(state.range(0));
  global_planner::NavGraph g;
  auto id = [](int r, int c) { return "n" + std::to_string(r) + "_" + std::to_string(c); };
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      g.add_node({id(r, c), static_cast<double>(c), static_cast<double>(r)});
    }
  }
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) {
        g.add_edge(id(r, c), id(r, c + 1), 1.0);
      }
      if (r + 1 < side) {
        g.add_edge(id(r, c), id(r + 1, c), 1.0);
      }
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(global_planner::shortest_path(g, id(0, 0), id(side - 1, side - 1)));
  }
}
BENCHMARK(BM_ShortestPath)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_RleRoundTrip(benchmark::State & state)
{
  perception::BitGrid g(640, 480);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 40; ++k) {
    const int x0 = static_cast<int>(rng() % 600), y0 = static_cast<int>(rng() % 440);
    for (int y = y0; y < y0 + 40; ++y) {
      for (int x = x0; x < x0 + 40; ++x) {
        g.set(x, y, true);
      }
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(perception::rle_decode(perception::rle_encode(g)));
  }
}
BENCHMARK(BM_RleRoundTrip)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
