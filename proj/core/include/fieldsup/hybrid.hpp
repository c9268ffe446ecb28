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

#ifndef FIELDSUP_HYBRID_HPP_
#define FIELDSUP_HYBRID_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fieldsup/automaton.hpp"

namespace fieldsup {

/// Scalars derived from the world for one robot. Guards and invariants are
/// threshold conditions over these.
enum class Scalar : std::size_t {
  kHeight,            // m, UAV only (0 for UGVs)
  kSpeed,             // m/s, robot speed
  kVpSpeed,           // m/s, norm of the last VP velocity command
  kObstacleDistance,  // m, VP to nearest obstacle (inf if none)
  kLinkDistance,      // m, UGV VP to nearest peer UGV VP (inf if none)
  kGoalDistance,      // m, to the mission goal (inf without a mission)
  kMissionPending,    // 1 when an injected mission awaits receipt
  kMissionAssigned,   // 1 after receipt, until finish/clear
  kMissionActive,     // 1 while the mission is being executed
  kMissionDone,       // 1 once the robot's own mission finished
  kPeersFinished,     // 1 when every UGV has finished its mission
  kMissionClock,      // s since mission start
  kCount
};

inline constexpr std::size_t kScalarCount = static_cast<std::size_t>(Scalar::kCount);

const char* to_string(Scalar s);
std::optional<Scalar> scalar_from_string(std::string_view s);

struct Observation {
  std::array<double, kScalarCount> values{};

  double operator[](Scalar s) const { return values[static_cast<std::size_t>(s)]; }
  double& operator[](Scalar s) { return values[static_cast<std::size_t>(s)]; }
};

enum class Cmp { kLt, kLe, kGt, kGe };
const char* to_string(Cmp c);

struct Condition {
  Scalar scalar;
  Cmp cmp;
  double threshold;

  /// `tol` widens the comparison so boundary points count as satisfied.
  bool holds(const Observation& o, double tol = 0.0) const;
  friend bool operator==(const Condition&, const Condition&) = default;
};

/// Conjunction of conditions; empty means true.
using Predicate = std::vector<Condition>;
bool holds(const Predicate& p, const Observation& o, double tol = 0.0);

/// Continuous-state transformer applied on a discrete jump.
using Reset = std::function<std::vector<double>(const std::vector<double>&)>;

struct HybridEdge {
  StateId src;
  EventId event;
  StateId dst;
  Predicate guard;     // includes the source invariant
  Reset reset;         // empty = identity
  // Edge kept in the model but never fired by the executor (operator-only).
  bool blocked = false;
};

struct HybridAutomaton {
  Fsa skeleton;
  std::size_t dim = 0;
  std::vector<Predicate> invariant;      // per mode
  std::vector<std::string> field_id;     // per mode
  std::vector<HybridEdge> edges;         // one per skeleton transition
  std::vector<double> initial_continuous;

  const std::string& name() const { return skeleton.name(); }
  const HybridEdge* edge(StateId src, EventId e) const;
  /// Applies the edge reset (identity when none is set).
  std::vector<double> apply_reset(const HybridEdge& e,
                                  const std::vector<double>& x) const;
};

/// The discrete skeleton.
Fsa discrete_projection(const HybridAutomaton& h);

/// Trivial hybrid automaton over `skeleton`: true invariants and guards,
/// field "hold", identity resets, zero continuous state of size `dim`.
HybridAutomaton from_skeleton(const Fsa& skeleton, std::size_t dim = 0);

/// Structural validation; throws ModelError.
void validate(const HybridAutomaton& h);

}  // namespace fieldsup

#endif  // FIELDSUP_HYBRID_HPP_
