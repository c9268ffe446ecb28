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

#include "fieldsup/world.hpp"

#include <algorithm>
#include <limits>

namespace fieldsup {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void Path::validate() const {
  if (waypoints.size() < 2) throw ConfigError("a path needs at least two waypoints");
  if (!(duration > 0.0)) throw ConfigError("path duration must be positive");
}

Vec3 Path::at(double tau) const {
  tau = std::clamp(tau, 0.0, 1.0);
  const std::size_t segs = waypoints.size() - 1;
  const double x = tau * static_cast<double>(segs);
  std::size_t k = std::min(static_cast<std::size_t>(x), segs - 1);
  const double f = x - static_cast<double>(k);
  return waypoints[k] + f * (waypoints[k + 1] - waypoints[k]);
}

double Path::remaining(double tau) const {
  tau = std::clamp(tau, 0.0, 1.0);
  const std::size_t segs = waypoints.size() - 1;
  const double x = tau * static_cast<double>(segs);
  std::size_t k = std::min(static_cast<std::size_t>(x), segs - 1);
  double r = (waypoints[k + 1] - at(tau)).norm();
  for (std::size_t j = k + 1; j < segs; ++j) {
    r += (waypoints[j + 1] - waypoints[j]).norm();
  }
  return r;
}

double Path::length() const { return remaining(0.0); }

double MissionState::tau(double now, const Path& path) const {
  if (!active && !done) return 0.0;
  if (done) return 1.0;
  return std::clamp((now - start_time) / path.duration, 0.0, 1.0);
}

double vp_distance(const WorldState& w, std::size_t i, std::size_t j) {
  return (w.vps[i].d - w.vps[j].d).norm();
}

Observation observe(const WorldState& w, std::size_t i, const MissionState& m,
                    const MissionPlan& plan, bool peers_finished) {
  const RobotState& r = w.robots[i];
  const VirtualPoint& vp = w.vps[i];
  Observation o;
  o[Scalar::kHeight] = r.kind == RobotKind::kUav ? r.height() : 0.0;
  o[Scalar::kSpeed] = r.velocity.norm();
  o[Scalar::kVpSpeed] = vp.last_velocity.norm();

  double obstacle = kInf;
  for (const auto& ob : w.obstacles) obstacle = std::min(obstacle, (vp.d - ob).norm());
  o[Scalar::kObstacleDistance] = obstacle;

  double link = kInf;
  if (r.kind == RobotKind::kUgv) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j == i || w.robots[j].kind != RobotKind::kUgv) continue;
      link = std::min(link, vp_distance(w, i, j));
    }
  }
  o[Scalar::kLinkDistance] = link;

  double goal = kInf;
  if (m.active || m.done) {
    const double tau = m.tau(w.time, plan.path);
    goal = plan.path.remaining(tau) + (r.position - plan.path.at(tau)).norm();
  }
  o[Scalar::kGoalDistance] = goal;
  o[Scalar::kMissionPending] = m.pending ? 1.0 : 0.0;
  o[Scalar::kMissionAssigned] = m.assigned ? 1.0 : 0.0;
  o[Scalar::kMissionActive] = m.active ? 1.0 : 0.0;
  o[Scalar::kMissionDone] = m.done ? 1.0 : 0.0;
  o[Scalar::kPeersFinished] = peers_finished ? 1.0 : 0.0;
  o[Scalar::kMissionClock] = m.active ? w.time - m.start_time : 0.0;
  return o;
}

}  // namespace fieldsup
