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

#include "fieldsup/hybrid.hpp"

#include "fieldsup/errors.hpp"

namespace fieldsup {

namespace {
constexpr std::array<const char*, kScalarCount> kScalarNames = {
    "height",        "speed",        "vp_speed",         "obstacle_distance",
    "link_distance", "goal_distance", "mission_pending", "mission_assigned",
    "mission_active", "mission_done", "peers_finished",  "mission_clock"};
}  // namespace

const char* to_string(Scalar s) {
  return kScalarNames.at(static_cast<std::size_t>(s));
}

std::optional<Scalar> scalar_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kScalarCount; ++i) {
    if (s == kScalarNames[i]) return static_cast<Scalar>(i);
  }
  return std::nullopt;
}

const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::kLt: return "<";
    case Cmp::kLe: return "<=";
    case Cmp::kGt: return ">";
    case Cmp::kGe: return ">=";
  }
  return "?";
}

bool Condition::holds(const Observation& o, double tol) const {
  double v = o[scalar];
  switch (cmp) {
    case Cmp::kLt: return v < threshold + tol;
    case Cmp::kLe: return v <= threshold + tol;
    case Cmp::kGt: return v > threshold - tol;
    case Cmp::kGe: return v >= threshold - tol;
  }
  return false;
}

bool holds(const Predicate& p, const Observation& o, double tol) {
  for (const auto& c : p) {
    if (!c.holds(o, tol)) return false;
  }
  return true;
}

const HybridEdge* HybridAutomaton::edge(StateId src, EventId e) const {
  for (const auto& x : edges) {
    if (x.src == src && x.event == e) return &x;
  }
  return nullptr;
}

std::vector<double> HybridAutomaton::apply_reset(
    const HybridEdge& e, const std::vector<double>& x) const {
  return e.reset ? e.reset(x) : x;
}

Fsa discrete_projection(const HybridAutomaton& h) { return h.skeleton; }

HybridAutomaton from_skeleton(const Fsa& skeleton, std::size_t dim) {
  HybridAutomaton h;
  h.skeleton = skeleton;
  h.dim = dim;
  h.invariant.assign(skeleton.num_states(), {});
  h.field_id.assign(skeleton.num_states(), "hold");
  for (StateId s = 0; s < skeleton.num_states(); ++s) {
    for (const auto& t : skeleton.out(s)) {
      h.edges.push_back(HybridEdge{s, t.event, t.target, {}, {}, false});
    }
  }
  h.initial_continuous.assign(dim, 0.0);
  return h;
}

void validate(const HybridAutomaton& h) {
  const Fsa& f = h.skeleton;
  if (h.invariant.size() != f.num_states() || h.field_id.size() != f.num_states()) {
    throw ModelError("'" + f.name() + "': per-mode tables do not match mode count");
  }
  if (h.edges.size() != f.num_transitions()) {
    throw ModelError("'" + f.name() + "': edge table does not match skeleton");
  }
  for (const auto& e : h.edges) {
    auto t = f.next(e.src, e.event);
    if (!t || *t != e.dst) {
      throw ModelError("'" + f.name() + "': edge not in skeleton");
    }
  }
  if (h.initial_continuous.size() != h.dim) {
    throw ModelError("'" + f.name() + "': initial continuous state has wrong size");
  }
}

}  // namespace fieldsup
