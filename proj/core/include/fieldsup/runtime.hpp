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

#ifndef FIELDSUP_RUNTIME_HPP_
#define FIELDSUP_RUNTIME_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldsup/dynamics.hpp"
#include "fieldsup/plants.hpp"
#include "fieldsup/policies.hpp"
#include "fieldsup/world.hpp"

namespace fieldsup {

/// Static data shared by every runtime snapshot of one system.
class RuntimeModel {
 public:
  RuntimeModel(PlantLibrary lib, InstantiatedSystem sys);

  const PlantLibrary& library() const noexcept { return lib_; }
  const InstantiatedSystem& system() const noexcept { return sys_; }
  std::size_t num_robots() const noexcept { return sys_.components.size(); }

  /// Plant component owning `event`; throws InputError for unknown ids.
  std::size_t component_of(std::string_view event) const;
  bool known(std::string_view event) const;
  bool controllable(std::string_view event) const;
  /// Events of the composed alphabet, sorted by id.
  const std::vector<std::string>& events() const noexcept { return events_; }

  /// Hybrid model of robot i (UAV template or UGV template).
  const HybridAutomaton& hybrid(std::size_t robot) const;
  /// Hybrid edge fired by `event` from `mode`, looked up by base event id.
  const HybridEdge* edge(std::size_t robot, StateId mode,
                         std::string_view event) const;

 private:
  PlantLibrary lib_;
  InstantiatedSystem sys_;
  std::vector<std::string> events_;
  std::map<std::string, std::pair<std::size_t, bool>, std::less<>> index_;
};

/// Discrete state of the supervised system: one state per plant component
/// and one per supervisor. Cheap to copy.
class SupervisorRuntime {
 public:
  explicit SupervisorRuntime(std::shared_ptr<const RuntimeModel> model);

  const RuntimeModel& model() const { return *model_; }
  std::shared_ptr<const RuntimeModel> model_ptr() const { return model_; }

  StateId mode(std::size_t robot) const { return plant_[robot]; }
  const std::string& mode_id(std::size_t robot) const;
  const std::vector<StateId>& plant_states() const noexcept { return plant_; }
  const std::vector<StateId>& supervisor_states() const noexcept { return sup_; }

  bool plant_eligible(std::string_view event) const;
  /// True when some supervisor's control pattern disables `event` now.
  bool disabled(std::string_view event) const;
  /// Current union of control patterns, sorted.
  std::vector<std::string> pattern() const;

  friend bool operator==(const SupervisorRuntime& a, const SupervisorRuntime& b) {
    return a.plant_ == b.plant_ && a.sup_ == b.sup_;
  }

 private:
  friend SupervisorRuntime step_supervisors(SupervisorRuntime rt,
                                            std::string_view event);

  std::shared_ptr<const RuntimeModel> model_;
  std::vector<StateId> plant_;
  std::vector<StateId> sup_;
};

/// Advances plant components and supervisors on `event`. Throws
/// ModelViolation if the plant cannot execute it and ExecutorBug if it is a
/// controllable event disabled by the current pattern.
SupervisorRuntime step_supervisors(SupervisorRuntime rt, std::string_view event);

/// Controllable events that are plant-eligible and disabled by no
/// supervisor, sorted by id.
std::set<std::string> enabled_events(const SupervisorRuntime& rt);

/// Default action priority over base ids: keep avoiding, keep formation,
/// keep mission, then lifecycle events in model order.
const std::vector<std::string>& default_priority();

/// Highest-priority member of `enabled`; ties on the base id go to the
/// lower robot index. Events absent from `priority` rank last, by robot
/// then id.
std::optional<std::string> select_action(
    const std::set<std::string>& enabled,
    const std::vector<std::string>& priority = default_priority());

// ------------------------------------------------------------ closed loop

struct EventObservation {
  double time = 0.0;
  std::string event;
  std::string source;   // robot name
  std::string cause;    // scalar name, "command" or "supervisor"
  double value = 0.0;   // scalar value at detection

  friend bool operator==(const EventObservation&, const EventObservation&) = default;
};

/// Uncontrollable events whose guard holds from the current modes, in robot
/// then event order. Operator-only edges are skipped.
std::vector<EventObservation> detect_events(const SupervisorRuntime& rt,
                                            std::span<const Observation> obs,
                                            double time);

struct LoopConfig {
  SwarmParams swarm;
  UavParams uav;
  UgvParams ugv;
  double dt = 0.02;
  std::vector<std::string> priority = default_priority();
};

struct LoopContext {
  LoopConfig config;
  std::vector<MissionPlan> plans;   // one per robot
};

struct LoopState {
  SupervisorRuntime rt;
  WorldState world;
  std::vector<MissionState> missions;
  // Controllable self-loops already fired in the current mode, per robot.
  std::vector<std::vector<std::string>> kept;
  std::uint64_t step = 0;
};

struct Sample {
  double time = 0.0;
  std::vector<RobotState> robots;
  std::vector<Vec3> vps;
  std::vector<Vec3> vp_velocities;
  std::vector<std::string> modes;
};

struct StepRecord {
  std::vector<EventObservation> events;
  Sample sample;                       // state after the step
  std::size_t invariant_violations = 0;
};

/// Initial loop state: every component and supervisor at its initial state,
/// VPs on the robots, links down.
LoopState initial_loop_state(std::shared_ptr<const RuntimeModel> model,
                             WorldState world);

/// Term mask and tracking target for robot i in its current mode.
std::pair<TermMask, Vec3> mode_command(const LoopState& s, const LoopContext& ctx,
                                       std::size_t i);

Sample make_sample(const LoopState& s);

/// One period: mission injection, link update, event detection, action
/// selection, then VP and robot integration. Deterministic.
std::pair<LoopState, StepRecord> closed_loop_step(const LoopContext& ctx,
                                                  LoopState s);

// ---------------------------------------------------------- verification

struct TraceVerdict {
  bool legal = true;
  std::size_t index = 0;        // offending event position
  EventString witness;          // prefix up to and including it
  std::string reason;
  std::vector<PolicyViolation> policy_violations;

  bool ok() const { return legal && policy_violations.empty(); }
};

/// Replays an event sequence through a fresh runtime and the policy
/// monitors. Stops at the first illegal event.
TraceVerdict verify_trace(std::shared_ptr<const RuntimeModel> model,
                          std::span<const std::string> events);

}  // namespace fieldsup

#endif  // FIELDSUP_RUNTIME_HPP_
