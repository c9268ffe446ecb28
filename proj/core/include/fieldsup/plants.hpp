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

#ifndef FIELDSUP_PLANTS_HPP_
#define FIELDSUP_PLANTS_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fieldsup/automaton.hpp"
#include "fieldsup/hybrid.hpp"
#include "fieldsup/synthesis.hpp"

namespace fieldsup {

/// Thresholds used by guards and invariants of the robot models.
struct PlantParams {
  double obstacle_threshold = 1.5;   // D_o (m)
  double hysteresis = 1.1;           // clear at hysteresis * threshold
  double comm_radius = 2.5;          // m
  double goal_tolerance = 0.3;       // m
  double ground_tolerance = 0.05;    // m, "landed" height
  double cruise_altitude = 3.0;      // m
  double hover_fraction = 0.95;      // of cruise altitude, to start a mission
  double stop_speed = 0.05;          // m/s, "velocity close to zero"
  double mission_timeout = 1000.0;   // s
  double invariant_slack = 0.1;      // m, one-step overshoot allowance

  /// Throws ConfigError on nonpositive or inconsistent values.
  void validate() const;
};

/// Which (template) subplant a specification is synthesized against.
enum class Subplant : std::size_t { kUav = 0, kUgv = 1, kUavUgv = 2 };

struct SpecTemplate {
  Fsa spec;
  Subplant subplant;
};

struct PlantLibrary {
  HybridAutomaton uav;   // G_A
  HybridAutomaton ugv;   // G_B, one copy per UGV after instantiation
  std::vector<SpecTemplate> specs;
  std::vector<EventDef> event_table;   // UAV rows then UGV rows
  PlantParams params;
};

/// The event table: ids, controllability and descriptions.
std::vector<EventDef> event_table();
Alphabet uav_alphabet();
Alphabet ugv_alphabet();

Fsa build_uav_skeleton();
Fsa build_ugv_skeleton();
/// H_A1, H_A2, H_A3, H_B1, H_B2, H_B3 in that order.
std::vector<SpecTemplate> build_specs();

/// Throws ConfigError on invalid params and ModelError if a skeleton does not
/// have the expected size.
PlantLibrary build_plants(const PlantParams& params = {});

/// Subplants indexed by Subplant: G_A, G_B, G_A || G_B.
std::vector<Fsa> template_subplants(const PlantLibrary& lib);
std::vector<SpecInput> template_spec_inputs(const PlantLibrary& lib);

// ---------------------------------------------------------- instantiation
//
// Robot 0 is the UAV; robots 1..n are UGVs. UGV events carry the robot index
// as a suffix ("b4" on robot 2 is "b4_2"); UAV events are unchanged.

std::string instance_event(std::string_view base, std::size_t robot);
/// Inverse of instance_event: strips a "_<n>" suffix if present.
std::string base_event(std::string_view id);
/// Robot index encoded in an event id (0 for unsuffixed events).
std::size_t event_robot(std::string_view id);
/// Renames every UGV event of `a` for the given robot.
Fsa instantiate_ugv(const Fsa& a, std::size_t robot);

struct SupervisorInstance {
  Fsa supervisor;
  Fsa subplant;          // the plant the pattern was computed against
  std::string spec;      // template spec name
  std::string owner;     // "uav0", "ugv1", ...
  Provenance provenance = Provenance::kSupcon;
  ControlPattern pattern;
};

struct InstantiatedSystem {
  std::size_t num_ugvs = 0;
  std::vector<Fsa> components;   // G_A, G_B1, ..., G_Bn
  Fsa plant;                     // their synchronous composition
  std::vector<SupervisorInstance> supervisors;
};

/// Copies each UGV-side template supervisor once per UGV. The composite
/// plant is built only when `compose_plant` is set.
InstantiatedSystem instantiate(const PlantLibrary& lib,
                               const ModularSupervisorSet& templates,
                               std::size_t num_ugvs, bool compose_plant = true);

std::string robot_name(std::size_t robot);

/// Guards, invariants, fields and thresholds as a JSON document.
nlohmann::json sidecar_json(const PlantLibrary& lib);

}  // namespace fieldsup

#endif  // FIELDSUP_PLANTS_HPP_
