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

#include "vipguide_cli/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vipguide/annotate.hpp"
#include "vipguide/calibration.hpp"
#include "vipguide/config.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/frame_io.hpp"
#include "vipguide/global_planner.hpp"
#include "vipguide/pipeline.hpp"
#include "vipguide/pnm.hpp"
#include "vipguide/sim.hpp"

namespace vipguide::cli
{
namespace
{

namespace fs = std::filesystem;

struct PlanArgs
{
  std::string frames_dir;
  std::string scenario;
  std::uint64_t seed = 1;
  int n_frames = 30;
  std::string config;
  std::string out;
  std::string annotate_dir;
  bool omit_latency = false;
};

struct RouteArgs
{
  std::string graph;
  std::string src;
  std::string dst;
  std::vector<std::string> block;
};

struct CalibrateArgs
{
  std::string samples;
  std::string out;
};

struct SimulateArgs
{
  std::string scenario;
  std::uint64_t seed = 1;
  int n_frames = 30;
  double noise = 0.0;
  std::string out;
};

class UsageError : public Error
{
public:
  using Error::Error;
};

calibration::CalibrationModel fit_scenario_law(const sim::RevLaw & law)
{
  const auto samples = sim::calibration_samples(law, 64, 1.0, 10.0);
  return calibration::fit(samples);
}

int run_plan(const PlanArgs & args, std::ostream & out)
{
  const bool use_frames = !args.frames_dir.empty();
  if (use_frames == !args.scenario.empty()) {
    throw UsageError("plan needs exactly one of --frames or --scenario");
  }

  pipeline::Config cfg = args.config.empty() ? pipeline::Config{} : pipeline::load_config(args.config);
  std::optional<sim::ScenarioGenerator> generator;
  if (!use_frames) {
    sim::ScenarioSpec spec;
    spec.kind = sim::parse_scenario_kind(args.scenario);
    spec.seed = args.seed;
    spec.n_frames = args.n_frames;
    if (!cfg.calibration) {
      cfg.calibration = fit_scenario_law(spec.law);
    }
    generator.emplace(spec);
  }
  pipeline::Pipeline pipe(std::move(cfg));

  std::ofstream trace(args.out, std::ios::binary | std::ios::trunc);
  if (!trace) {
    throw Error("cannot open " + args.out + " for writing");
  }
  if (!args.annotate_dir.empty()) {
    fs::create_directories(args.annotate_dir);
  }

  auto emit = [&](const perception::PerceptionFrame & frame, double decode_ms) {
    const auto decision = pipe.process_frame(frame, decode_ms);
    trace << pipeline::decision_to_json(decision, !args.omit_latency) << '\n';
    if (!args.annotate_dir.empty()) {
      const auto image = annotate::render(frame, decision);
      perception::write_file(
        fs::path(args.annotate_dir) / (std::to_string(frame.frame_id) + ".ppm"), pnm::write_ppm(image));
    }
  };

  if (use_frames) {
    perception::FrameStreamReader reader(args.frames_dir);
    while (true) {
      const auto t0 = std::chrono::steady_clock::now();
      perception::PerceptionFrame frame;
      try {
        auto encoded = reader.next_encoded();
        if (!encoded) {
          break;
        }
        frame = perception::decode_frame(encoded->record, encoded->depth_sidecar);
        reader.check_order(frame);
      } catch (const Error & e) {
        throw Error("frames.jsonl line " + std::to_string(reader.line_number()) + ": " + e.what());
      }
      const double decode_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      emit(frame, decode_ms);
    }
  } else {
    while (auto sf = generator->next()) {
      emit(sf->frame, 0.0);
    }
  }
  trace.flush();
  if (!trace) {
    throw Error("failed writing " + args.out);
  }

  const auto & stats = pipe.latency();
  std::ostringstream summary;
  summary << "frames " << stats.count() << ", planner latency p50 " << stats.planner_percentile(50)
          << " ms, p90 " << stats.planner_percentile(90) << " ms\n";
  out << summary.str();
  return kExitOk;
}

int run_route(const RouteArgs & args, std::ostream & out)
{
  auto graph = global_planner::load_graph_file(args.graph);
  for (const auto & pair : args.block) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos || pair.find(',', comma + 1) != std::string::npos) {
      throw UsageError("--block expects U,V but got '" + pair + "'");
    }
    graph.block_edge(pair.substr(0, comma), pair.substr(comma + 1));
  }
  const auto route = global_planner::shortest_path(graph, args.src, args.dst);
  nlohmann::ordered_json j;
  j["route"] = route.nodes;
  j["cost"] = route.total_cost;
  out << j.dump() << '\n';
  return kExitOk;
}

int run_calibrate(const CalibrateArgs & args, std::ostream & out)
{
  const auto samples = calibration::parse_samples_csv(perception::read_file(args.samples));
  const auto model = calibration::fit(samples);
  const auto text = calibration::model_to_json(model);
  perception::write_file(args.out, text + "\n");
  out << text << '\n';
  return kExitOk;
}

int run_simulate(const SimulateArgs & args, std::ostream & out)
{
  sim::ScenarioSpec spec;
  spec.kind = sim::parse_scenario_kind(args.scenario);
  spec.seed = args.seed;
  spec.n_frames = args.n_frames;
  spec.rev_noise_sigma = args.noise;
  sim::write_dataset(spec, args.out);
  out << "wrote " << args.n_frames << " frames to " << args.out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Drone guidance planner for visually impaired pedestrians", "vipguide"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto * plan_cmd = app.add_subcommand("plan", "Run the per-frame planner and write a decision trace");
  auto * frames_opt = plan_cmd->add_option("--frames", plan.frames_dir, "Frame directory (frames.jsonl)");
  auto * scenario_opt = plan_cmd->add_option("--scenario", plan.scenario, "Generated scenario kind");
  frames_opt->excludes(scenario_opt);
  plan_cmd->add_option("--seed", plan.seed, "Scenario seed")->needs(scenario_opt);
  plan_cmd->add_option("--n-frames", plan.n_frames, "Scenario length")
    ->needs(scenario_opt)
    ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--config", plan.config, "Configuration JSON");
  plan_cmd->add_option("--out", plan.out, "Trace JSONL output")->required();
  plan_cmd->add_option("--annotate", plan.annotate_dir, "Directory for annotated PPM frames");
  plan_cmd->add_flag("--omit-latency", plan.omit_latency, "Leave latency_ms out of the trace");

  RouteArgs route;
  auto * route_cmd = app.add_subcommand("route", "Shortest route on a navigation graph");
  route_cmd->add_option("--graph", route.graph, "Graph JSON")->required();
  route_cmd->add_option("--src", route.src, "Start node")->required();
  route_cmd->add_option("--dst", route.dst, "Goal node")->required();
  route_cmd->add_option("--block", route.block, "Edge to block, as U,V (repeatable)");

  CalibrateArgs calib;
  auto * calib_cmd = app.add_subcommand("calibrate", "Fit the REV-to-distance model");
  calib_cmd->add_option("--samples", calib.samples, "CSV with header rev,distance_m")->required();
  calib_cmd->add_option("--out", calib.out, "Model JSON output")->required();

  SimulateArgs simulate;
  auto * sim_cmd = app.add_subcommand("simulate", "Write a synthetic scenario dataset");
  sim_cmd->add_option("--scenario", simulate.scenario, "Scenario kind")->required();
  sim_cmd->add_option("--seed", simulate.seed, "Seed");
  sim_cmd->add_option("--n-frames", simulate.n_frames, "Number of frames")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--noise", simulate.noise, "Gaussian REV noise sigma")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--out", simulate.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*plan_cmd) {
      return run_plan(plan, out);
    }
    if (*route_cmd) {
      return run_route(route, out);
    }
    if (*calib_cmd) {
      return run_calibrate(calib, out);
    }
    return run_simulate(simulate, out);
  } catch (const UsageError & e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace vipguide::cli
