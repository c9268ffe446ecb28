// Copyright 2026 The fieldsup Authors
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

#ifndef FIELDSUP_SCENARIO_HPP_
#define FIELDSUP_SCENARIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fieldsup/runtime.hpp"
#include "fieldsup/trace.hpp"

namespace fieldsup {

enum class PathKind { kCircular, kStraight };

/// Everything needed to reproduce a run. Serialized as flat `key = value`
/// lines; nested parameter blocks use dotted keys ("swarm.K_P").
struct ScenarioConfig {
  std::string name = "scenario";
  PathKind path = PathKind::kCircular;
  bool obstacles = false;
  double duration = 120.0;          // s
  double dt = 0.02;                 // s
  std::uint64_t seed = 1;
  std::size_t num_ugvs = 2;

  // Geometry. UGV i drives the lane offset (i - 1) * lane_spacing inward of
  // the first lane; the UAV flies uav_lane_offset outward at cruise height.
  double circle_radius = 5.0;       // m, first UGV lane
  double straight_length = 20.0;    // m
  double lane_spacing = 1.0;        // m
  double uav_lane_offset = 2.0;     // m
  double ugv_start_offset = 2.5;    // m, extra inward offset of later UGVs at start
  double ramp_fraction = 0.1;       // of the path, to merge into the lane
  std::size_t waypoints = 120;      // segments per path
  std::size_t obstacle_count = 3;
  double obstacle_offset = 0.9;     // m, outward of the first lane
  double obstacle_jitter = 0.0;     // m, uniform, drawn from seed

  // Missions.
  double uav_mission_time = 1.0;    // s
  double ugv_mission_time = 10.0;   // s
  double uav_speed = 1.0;           // m/s nominal along the path
  double ugv_speed = 0.5;           // m/s nominal along the first lane

  // Reporting.
  double formation_settle = 5.0;    // s after the last connect event
  double formation_band = 0.1;      // m, either side of D_f

  PlantParams plant;
  SwarmParams swarm;
  UavParams uav;
  UgvParams ugv;

  /// Throws ConfigError.
  void validate() const;
};

/// The four benchmark cases: 1 circular with obstacles, 2 circular,
/// 3 straight with obstacles, 4 straight. Throws ConfigError otherwise.
ScenarioConfig case_config(int index);

/// Byte-stable text form; parse(write(c)) writes back identically.
std::string write_config(const ScenarioConfig& c);
/// Unknown, duplicate or malformed lines and unparsable values throw
/// ParseError with the line number; a config failing validation throws
/// ConfigError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig read_config(const std::string& file);
/// Applies one `key=value` override.
void set_config_value(ScenarioConfig& c, std::string_view key, std::string_view value);
std::vector<std::string> config_keys();

/// Mission plans, initial world (robots, obstacles) for a configuration.
struct ScenarioSetup {
  WorldState world;
  std::vector<MissionPlan> plans;
};
ScenarioSetup build_setup(const ScenarioConfig& c);

/// Library and instantiated system synthesized for `num_ugvs` UGVs.
std::shared_ptr<const RuntimeModel> build_runtime_model(const PlantParams& plant,
                                                        std::size_t num_ugvs);

struct SimulationResult {
  std::vector<Sample> samples;          // one per step, after the step
  std::vector<EventObservation> events;
  std::size_t invariant_violations = 0;
  nlohmann::json summary;
  // Set when the run stopped early on a model violation or numerical fault.
  std::optional<std::string> failure;
  std::uint64_t failure_step = 0;
};

/// Runs the closed loop for the configured duration. A ModelViolation,
/// SimulationFault or ExecutorBug stops the run; everything recorded up to
/// that step is kept and the failure is reported in the result.
SimulationResult run_simulation(const ScenarioConfig& c);

/// Summary figures from trace rows and the event log.
nlohmann::json summarize(const ScenarioConfig& c, const std::vector<TraceRow>& rows,
                         const std::vector<EventObservation>& events,
                         std::size_t invariant_violations);

/// Writes each supervisor as `<name>.fsa`, plus manifest.json and
/// report.json.
void save_supervisor_set(const ModularSupervisorSet& set,
                         const std::filesystem::path& dir);
/// Reads a directory written by save_supervisor_set. Control patterns are
/// recomputed against `subplants`.
ModularSupervisorSet load_supervisor_set(const std::filesystem::path& dir,
                                         std::span<const Fsa> subplants);

}  // namespace fieldsup

#endif  // FIELDSUP_SCENARIO_HPP_
