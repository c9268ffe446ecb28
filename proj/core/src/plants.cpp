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

#include "fieldsup/plants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "fieldsup/errors.hpp"

namespace fieldsup {
namespace {

struct Row {
  const char* src;
  const char* event;
  const char* dst;
};

const std::vector<EventDef>& table() {
  static const std::vector<EventDef> rows = {
      {"a1", true, "Arm"},
      {"a3", true, "Disarm"},
      {"a5", true, "Take off"},
      {"a7", true, "Land"},
      {"a9", true, "Keep hovering"},
      {"a11", true, "Return to home"},
      {"a14", false, "Start mission"},
      {"a15", true, "Keep mission"},
      {"a18", false, "Receive mission"},
      {"a20", false, "Finish mission"},
      {"a22", false, "Time out"},
      {"a24", false, "Detect obstacles"},
      {"a26", false, "Detect free space"},
      {"a27", true, "Keep avoiding"},
      {"a29", false, "Clear mission"},
      {"b1", true, "Start mission"},
      {"b4", false, "Detect obstacles"},
      {"b6", false, "Detect free space"},
      {"b7", true, "Keep avoiding"},
      {"b10", false, "Network connected"},
      {"b12", false, "Network disconnected"},
      {"b13", true, "Keep formation"},
      {"b15", true, "Keep mission"},
      {"b18", false, "Receive mission"},
      {"b20", false, "Finish mission"},
      {"b21", true, "Clear mission"},
      {"b23", true, "Break formation"},
  };
  return rows;
}

const EventDef& table_entry(std::string_view id) {
  for (const auto& e : table()) {
    if (e.id == id) return e;
  }
  throw ModelError("event '" + std::string(id) + "' is not in the event table");
}

Alphabet alphabet_with_prefix(char prefix) {
  std::vector<EventDef> out;
  for (const auto& e : table()) {
    if (e.id.front() == prefix) out.push_back(e);
  }
  return Alphabet(std::move(out));
}

struct ModeRow {
  const char* id;
  const char* label;
};

Fsa build_skeleton(std::string name, Alphabet alphabet,
                   const std::vector<ModeRow>& modes, const char* initial,
                   const std::vector<const char*>& marked,
                   const std::vector<Row>& rows) {
  FsaBuilder b(std::move(name), std::move(alphabet));
  for (const auto& m : modes) b.add_state(m.id, m.label);
  b.set_initial(initial);
  for (const char* m : marked) b.mark(m);
  for (const auto& r : rows) b.add_transition(r.src, r.event, r.dst);
  return std::move(b).build();
}

// Specs take the alphabet of the events they mention.
Fsa build_spec(std::string name, const char* initial,
               const std::vector<const char*>& marked,
               const std::vector<Row>& rows) {
  std::vector<EventDef> events;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (seen.insert(r.event).second) events.push_back(table_entry(r.event));
  }
  FsaBuilder b(std::move(name), Alphabet(std::move(events)));
  for (const auto& r : rows) {
    b.state(r.src);
    b.state(r.dst);
  }
  b.set_initial(initial);
  for (const char* m : marked) b.mark(m);
  for (const auto& r : rows) b.add_transition(r.src, r.event, r.dst);
  return std::move(b).build();
}

const std::vector<Row>& uav_rows() {
  static const std::vector<Row> rows = {
      {"A1", "a1", "A2"},  {"A1", "a29", "A1"},
      {"A2", "a3", "A1"},  {"A2", "a5", "A3"},  {"A2", "a18", "A2"},
      {"A2", "a29", "A1"},
      {"A3", "a7", "A2"},  {"A3", "a9", "A3"},  {"A3", "a14", "A4"},
      {"A3", "a11", "A4"}, {"A3", "a24", "A5"}, {"A3", "a22", "A3"},
      {"A4", "a15", "A4"}, {"A4", "a20", "A3"}, {"A4", "a22", "A3"},
      {"A4", "a24", "A5"}, {"A4", "a7", "A2"},
      {"A5", "a27", "A5"}, {"A5", "a26", "A4"}, {"A5", "a20", "A3"},
      {"A5", "a22", "A3"}, {"A5", "a11", "A4"}, {"A5", "a7", "A2"},
  };
  return rows;
}

const std::vector<Row>& ugv_rows() {
  static const std::vector<Row> rows = {
      {"B1", "b18", "B1"}, {"B1", "b1", "B2"},
      {"B2", "b15", "B2"}, {"B2", "b4", "B3"},  {"B2", "b10", "B4"},
      {"B2", "b21", "B1"},
      {"B3", "b7", "B3"},  {"B3", "b6", "B2"},
      {"B4", "b4", "B3"},  {"B4", "b12", "B2"}, {"B4", "b13", "B4"},
      {"B4", "b23", "B2"}, {"B4", "b20", "B1"},
  };
  return rows;
}

// Edges the executor never fires: they model operator commands (disarm,
// return home, clear or break formation, emergency land) with no trigger in
// the simulated scenarios.
bool operator_only(std::string_view src, std::string_view event) {
  if (event == "a3" || event == "a11" || event == "b21" || event == "b23") {
    return true;
  }
  return event == "a7" && (src == "A4" || src == "A5");
}

Condition lt(Scalar s, double v) { return {s, Cmp::kLt, v}; }
Condition le(Scalar s, double v) { return {s, Cmp::kLe, v}; }
Condition gt(Scalar s, double v) { return {s, Cmp::kGt, v}; }
Condition ge(Scalar s, double v) { return {s, Cmp::kGe, v}; }
Condition flag(Scalar s) { return ge(s, 0.5); }
Condition no_flag(Scalar s) { return lt(s, 0.5); }

Predicate uav_invariant(std::string_view mode, const PlantParams& p) {
  Predicate inv = {ge(Scalar::kHeight, 0.0)};
  if (mode == "A1") inv.push_back(le(Scalar::kHeight, p.ground_tolerance));
  if (mode == "A5") {
    inv.push_back(le(Scalar::kObstacleDistance,
                     p.hysteresis * p.obstacle_threshold + p.invariant_slack));
  }
  return inv;
}

Predicate ugv_invariant(std::string_view mode, const PlantParams& p) {
  if (mode == "B3") {
    return {le(Scalar::kObstacleDistance,
               p.hysteresis * p.obstacle_threshold + p.invariant_slack)};
  }
  if (mode == "B4") {
    return {le(Scalar::kLinkDistance,
               p.hysteresis * p.comm_radius + p.invariant_slack)};
  }
  return {};
}

Predicate event_guard(std::string_view src, std::string_view ev,
                      const PlantParams& p) {
  using S = Scalar;
  const double detect = p.obstacle_threshold;
  const double clear = p.hysteresis * p.obstacle_threshold;
  // UAV
  if (ev == "a1") return {flag(S::kMissionPending)};
  if (ev == "a3") return {le(S::kHeight, p.ground_tolerance)};
  if (ev == "a5") return {flag(S::kMissionAssigned)};
  if (ev == "a7") return {flag(S::kMissionDone)};
  if (ev == "a9" || ev == "a15" || ev == "a27") return {};
  if (ev == "a11") return {};
  if (ev == "a14") {
    return {flag(S::kMissionAssigned), no_flag(S::kMissionActive),
            no_flag(S::kMissionDone),
            ge(S::kHeight, p.hover_fraction * p.cruise_altitude),
            le(S::kSpeed, p.stop_speed)};
  }
  if (ev == "a18" || ev == "b18") return {flag(S::kMissionPending)};
  if (ev == "a20" || ev == "b20") {
    return {flag(S::kMissionActive), le(S::kGoalDistance, p.goal_tolerance)};
  }
  if (ev == "a22") {
    return {flag(S::kMissionActive), ge(S::kMissionClock, p.mission_timeout)};
  }
  if (ev == "a24" || ev == "b4") return {lt(S::kObstacleDistance, detect)};
  if (ev == "a26" || ev == "b6") return {gt(S::kObstacleDistance, clear)};
  if (ev == "a29") {
    return {flag(S::kMissionAssigned), flag(S::kMissionDone),
            flag(S::kPeersFinished), le(S::kHeight, p.ground_tolerance)};
  }
  // UGV
  if (ev == "b1") {
    return {flag(S::kMissionAssigned), no_flag(S::kMissionDone),
            le(S::kSpeed, p.stop_speed)};
  }
  if (ev == "b7" || ev == "b13" || ev == "b15") return {};
  if (ev == "b10") return {le(S::kLinkDistance, p.comm_radius)};
  if (ev == "b12") return {gt(S::kLinkDistance, p.hysteresis * p.comm_radius)};
  if (ev == "b21" || ev == "b23") return {};
  throw ModelError("no guard for event '" + std::string(ev) + "' from '" +
                   std::string(src) + "'");
}

std::string field_for(std::string_view mode) {
  if (mode == "A1" || mode == "B1") return "hold";
  if (mode == "A2") return "ground";
  if (mode == "A3") return "hover";
  if (mode == "A4" || mode == "B2") return "track";
  if (mode == "A5" || mode == "B3") return "avoid";
  if (mode == "B4") return "formation";
  throw ModelError("no field for mode '" + std::string(mode) + "'");
}

HybridAutomaton make_hybrid(Fsa skeleton, std::size_t dim, bool uav,
                            const PlantParams& p) {
  HybridAutomaton h;
  h.dim = dim;
  for (StateId s = 0; s < skeleton.num_states(); ++s) {
    const auto& m = skeleton.state_id(s);
    h.invariant.push_back(uav ? uav_invariant(m, p) : ugv_invariant(m, p));
    h.field_id.push_back(field_for(m));
  }
  for (StateId s = 0; s < skeleton.num_states(); ++s) {
    for (const auto& t : skeleton.out(s)) {
      const auto& ev = skeleton.alphabet()[t.event].id;
      Predicate g = h.invariant[s];
      auto extra = event_guard(skeleton.state_id(s), ev, p);
      g.insert(g.end(), extra.begin(), extra.end());
      h.edges.push_back(HybridEdge{s, t.event, t.target, std::move(g), {},
                                   operator_only(skeleton.state_id(s), ev)});
    }
  }
  h.initial_continuous.assign(dim, 0.0);
  h.skeleton = std::move(skeleton);
  validate(h);
  return h;
}

void expect_size(const Fsa& f, std::size_t states, std::size_t trans,
                 std::size_t events) {
  if (f.num_states() != states || f.num_transitions() != trans ||
      f.alphabet().size() != events) {
    throw ModelError("'" + f.name() + "' has " + std::to_string(f.num_states()) +
                     "/" + std::to_string(f.num_transitions()) + "/" +
                     std::to_string(f.alphabet().size()) +
                     " states/transitions/events, expected " +
                     std::to_string(states) + "/" + std::to_string(trans) + "/" +
                     std::to_string(events));
  }
}

}  // namespace

void PlantParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be positive");
    }
  };
  positive(obstacle_threshold, "obstacle_threshold");
  positive(comm_radius, "comm_radius");
  positive(goal_tolerance, "goal_tolerance");
  positive(ground_tolerance, "ground_tolerance");
  positive(cruise_altitude, "cruise_altitude");
  positive(stop_speed, "stop_speed");
  positive(mission_timeout, "mission_timeout");
  if (!(hysteresis >= 1.0)) throw ConfigError("hysteresis must be >= 1");
  if (!(hover_fraction > 0.0 && hover_fraction <= 1.0)) {
    throw ConfigError("hover_fraction must lie in (0, 1]");
  }
  if (!(invariant_slack >= 0.0)) throw ConfigError("invariant_slack must be >= 0");
}

std::vector<EventDef> event_table() { return table(); }
Alphabet uav_alphabet() { return alphabet_with_prefix('a'); }
Alphabet ugv_alphabet() { return alphabet_with_prefix('b'); }

Fsa build_uav_skeleton() {
  Fsa f = build_skeleton("G_A", uav_alphabet(),
                         {{"A1", "Ideal"},
                          {"A2", "Arming"},
                          {"A3", "Hovering"},
                          {"A4", "Flying"},
                          {"A5", "Avoiding"}},
                         "A1", {"A1", "A3"}, uav_rows());
  expect_size(f, 5, 23, 15);
  return f;
}

Fsa build_ugv_skeleton() {
  Fsa f = build_skeleton("G_B", ugv_alphabet(),
                         {{"B1", "Stationary"},
                          {"B2", "Navigation"},
                          {"B3", "Safety"},
                          {"B4", "Formation"}},
                         "B1", {"B1", "B4"}, ugv_rows());
  expect_size(f, 4, 13, 12);
  return f;
}

std::vector<SpecTemplate> build_specs() {
  std::vector<SpecTemplate> out;
  // Arming, take-off, flight and landing.
  out.push_back({build_spec("H_A1", "t1", {"t1", "t3"},
                            {{"t1", "a1", "t2"},  {"t1", "a29", "t1"},
                             {"t2", "a3", "t1"},  {"t2", "a18", "t2"},
                             {"t2", "a29", "t1"}, {"t2", "a5", "t3"},
                             {"t3", "a14", "t3"}, {"t3", "a20", "t3"},
                             {"t3", "a22", "t3"}, {"t3", "a24", "t4"},
                             {"t3", "a7", "t2"},  {"t3", "a11", "t2"},
                             {"t4", "a26", "t3"}, {"t4", "a20", "t3"},
                             {"t4", "a22", "t3"}, {"t4", "a11", "t3"},
                             {"t4", "a7", "t2"}}),
                 Subplant::kUav});
  // UAV obstacle avoidance.
  out.push_back({build_spec("H_A2", "o1", {"o1"},
                            {{"o1", "a24", "o2"}, {"o1", "a11", "o1"},
                             {"o1", "a7", "o1"},  {"o1", "a20", "o1"},
                             {"o1", "a22", "o1"},
                             {"o2", "a27", "o3"}, {"o2", "a26", "o1"},
                             {"o2", "a20", "o1"}, {"o2", "a22", "o1"},
                             {"o3", "a27", "o3"}, {"o3", "a26", "o1"},
                             {"o3", "a20", "o1"}, {"o3", "a22", "o1"},
                             {"o3", "a11", "o3"}}),
                 Subplant::kUav});
  // UAV mission management.
  out.push_back({build_spec("H_A3", "s3", {"s3", "s4"},
                            {{"s3", "a18", "s1"}, {"s3", "a29", "s3"},
                             {"s3", "a7", "s3"},
                             {"s1", "a18", "s1"}, {"s1", "a5", "s2"},
                             {"s1", "a29", "s3"},
                             {"s2", "a20", "s4"}, {"s2", "a22", "s4"},
                             {"s4", "a20", "s4"}, {"s4", "a22", "s4"},
                             {"s4", "a7", "s4"},  {"s4", "a18", "s1"},
                             {"s4", "a29", "s3"}}),
                 Subplant::kUav});
  // UGV navigation; landing waits for the UGV to finish.
  out.push_back({build_spec("H_B1", "n1", {"n1", "n3"},
                            {{"n1", "b18", "n1"}, {"n1", "b1", "n2"},
                             {"n2", "b20", "n3"}, {"n2", "b21", "n3"},
                             {"n3", "a7", "n3"},  {"n3", "b18", "n1"}}),
                 Subplant::kUavUgv});
  // UGV obstacle avoidance.
  out.push_back({build_spec("H_B2", "v1", {"v1"},
                            {{"v1", "b4", "v2"}, {"v1", "b15", "v1"},
                             {"v1", "b13", "v1"},
                             {"v2", "b7", "v3"}, {"v2", "b6", "v1"},
                             {"v3", "b7", "v3"}, {"v3", "b6", "v1"}}),
                 Subplant::kUgv});
  // UGV mission management.
  out.push_back({build_spec("H_B3", "s3", {"s3", "s4"},
                            {{"s3", "b18", "s1"},
                             {"s1", "b18", "s1"}, {"s1", "b1", "s2"},
                             {"s2", "b15", "s2"}, {"s2", "b20", "s4"},
                             {"s2", "b21", "s3"}, {"s2", "b23", "s3"},
                             {"s4", "b18", "s1"}}),
                 Subplant::kUgv});
  return out;
}

PlantLibrary build_plants(const PlantParams& params) {
  params.validate();
  PlantLibrary lib;
  lib.params = params;
  lib.uav = make_hybrid(build_uav_skeleton(), 6, true, params);
  lib.ugv = make_hybrid(build_ugv_skeleton(), 5, false, params);
  lib.specs = build_specs();
  lib.event_table = event_table();
  return lib;
}

std::vector<Fsa> template_subplants(const PlantLibrary& lib) {
  const Fsa& a = lib.uav.skeleton;
  const Fsa& b = lib.ugv.skeleton;
  return {a, b, sync(a, b).renamed("G_A||G_B")};
}

std::vector<SpecInput> template_spec_inputs(const PlantLibrary& lib) {
  std::vector<SpecInput> out;
  for (const auto& s : lib.specs) {
    out.push_back({s.spec, static_cast<std::size_t>(s.subplant)});
  }
  return out;
}

std::string instance_event(std::string_view base, std::size_t robot) {
  return std::string(base) + "_" + std::to_string(robot);
}

std::string base_event(std::string_view id) {
  auto pos = id.rfind('_');
  if (pos == std::string_view::npos) return std::string(id);
  return std::string(id.substr(0, pos));
}

std::size_t event_robot(std::string_view id) {
  auto pos = id.rfind('_');
  if (pos == std::string_view::npos || pos + 1 == id.size()) return 0;
  std::size_t r = 0;
  for (char c : id.substr(pos + 1)) {
    if (c < '0' || c > '9') return 0;
    r = r * 10 + static_cast<std::size_t>(c - '0');
  }
  return r;
}

Fsa instantiate_ugv(const Fsa& a, std::size_t robot) {
  std::map<std::string, std::string, std::less<>> mapping;
  for (const auto& e : a.alphabet().events()) {
    if (e.id.front() == 'b') mapping.emplace(e.id, instance_event(e.id, robot));
  }
  return rename_events(a, mapping, a.name() + "_" + std::to_string(robot));
}

std::string robot_name(std::size_t robot) {
  return robot == 0 ? "uav0" : "ugv" + std::to_string(robot);
}

InstantiatedSystem instantiate(const PlantLibrary& lib,
                               const ModularSupervisorSet& templates,
                               std::size_t num_ugvs, bool compose_plant) {
  InstantiatedSystem sys;
  sys.num_ugvs = num_ugvs;
  const Fsa& ga = lib.uav.skeleton;
  sys.components.push_back(ga);
  for (std::size_t i = 1; i <= num_ugvs; ++i) {
    sys.components.push_back(instantiate_ugv(lib.ugv.skeleton, i));
  }
  if (compose_plant) sys.plant = sync_all(sys.components).renamed("G_plant");

  for (std::size_t j = 0; j < templates.supervisors.size(); ++j) {
    const Fsa& sup = templates.supervisors[j];
    auto kind = static_cast<Subplant>(templates.subplant.at(j));
    if (kind == Subplant::kUav) {
      sys.supervisors.push_back({sup, ga, sup.name(), robot_name(0),
                                 templates.provenance[j],
                                 templates.patterns[j]});
      continue;
    }
    for (std::size_t i = 1; i <= num_ugvs; ++i) {
      Fsa s = instantiate_ugv(sup, i);
      Fsa sub = sys.components[i];
      if (kind == Subplant::kUavUgv) sub = sync(ga, sub);
      ControlPattern cp = control_data(s, sub);
      sys.supervisors.push_back({std::move(s), std::move(sub), sup.name(),
                                 robot_name(i), templates.provenance[j],
                                 std::move(cp)});
    }
  }
  return sys;
}

namespace {

nlohmann::json predicate_json(const Predicate& p) {
  auto out = nlohmann::json::array();
  for (const auto& c : p) {
    out.push_back({{"scalar", to_string(c.scalar)},
                   {"cmp", to_string(c.cmp)},
                   {"threshold", c.threshold}});
  }
  return out;
}

nlohmann::json hybrid_json(const HybridAutomaton& h) {
  using nlohmann::json;
  const Fsa& f = h.skeleton;
  json modes = json::array();
  for (StateId s = 0; s < f.num_states(); ++s) {
    modes.push_back({{"id", f.state_id(s)},
                     {"label", f.state_label(s)},
                     {"marked", f.is_marked(s)},
                     {"field", h.field_id[s]},
                     {"invariant", predicate_json(h.invariant[s])}});
  }
  json edges = json::array();
  for (const auto& e : h.edges) {
    edges.push_back({{"src", f.state_id(e.src)},
                     {"event", f.alphabet()[e.event].id},
                     {"dst", f.state_id(e.dst)},
                     {"guard", predicate_json(e.guard)},
                     {"reset", "identity"},
                     {"operator_only", e.blocked}});
  }
  return {{"name", f.name()},
          {"initial", f.state_id(f.initial())},
          {"dim", h.dim},
          {"initial_continuous", h.initial_continuous},
          {"modes", std::move(modes)},
          {"edges", std::move(edges)}};
}

}  // namespace

nlohmann::json sidecar_json(const PlantLibrary& lib) {
  using nlohmann::json;
  const auto& p = lib.params;
  json events = json::array();
  for (const auto& e : lib.event_table) {
    events.push_back({{"id", e.id},
                      {"controllable", e.controllable},
                      {"label", e.label}});
  }
  json specs = json::array();
  for (const auto& s : lib.specs) {
    static constexpr const char* kNames[] = {"G_A", "G_B", "G_A||G_B"};
    specs.push_back({{"name", s.spec.name()},
                     {"subplant", kNames[static_cast<std::size_t>(s.subplant)]}});
  }
  return {{"version", 1},
          {"thresholds",
           {{"obstacle_threshold", p.obstacle_threshold},
            {"hysteresis", p.hysteresis},
            {"comm_radius", p.comm_radius},
            {"goal_tolerance", p.goal_tolerance},
            {"ground_tolerance", p.ground_tolerance},
            {"cruise_altitude", p.cruise_altitude},
            {"hover_fraction", p.hover_fraction},
            {"stop_speed", p.stop_speed},
            {"mission_timeout", p.mission_timeout},
            {"invariant_slack", p.invariant_slack}}},
          {"events", std::move(events)},
          {"uav", hybrid_json(lib.uav)},
          {"ugv", hybrid_json(lib.ugv)},
          {"specs", std::move(specs)}};
}

}  // namespace fieldsup
