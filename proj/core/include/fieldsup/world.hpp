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

#ifndef FIELDSUP_WORLD_HPP_
#define FIELDSUP_WORLD_HPP_

#include <cstddef>
#include <vector>

#include "fieldsup/dynamics.hpp"
#include "fieldsup/hybrid.hpp"

namespace fieldsup {

/// Waypoint polyline traversed in a fixed time. Progress tau in [0, 1] is
/// spread evenly over segments (not arc length), so paths built with the
/// same number of waypoints stay in step with each other.
struct Path {
  std::vector<Vec3> waypoints;
  double duration = 1.0;   // s

  Vec3 at(double tau) const;
  /// Arc length still ahead of the point at(tau).
  double remaining(double tau) const;
  double length() const;
  /// Throws ConfigError (fewer than two waypoints, nonpositive duration).
  void validate() const;
};

struct MissionPlan {
  Path path;
  double inject_time = 0.0;   // s, when the operator sends the mission
};

struct MissionState {
  bool injected = false;
  bool pending = false;
  bool assigned = false;
  bool active = false;
  bool done = false;
  double start_time = 0.0;

  double tau(double now, const Path& path) const;
};

/// Scalars for robot i. `peers_finished` is true when every UGV is done.
Observation observe(const WorldState& w, std::size_t i, const MissionState& m,
                    const MissionPlan& plan, bool peers_finished);

/// Distance between the VPs of i and j.
double vp_distance(const WorldState& w, std::size_t i, std::size_t j);

}  // namespace fieldsup

#endif  // FIELDSUP_WORLD_HPP_
