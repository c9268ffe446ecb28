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

#include "fieldsup/runtime.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/core.h>

#include "fieldsup/errors.hpp"

namespace fieldsup {

// ------------------------------------------------------------ RuntimeModel

RuntimeModel::RuntimeModel(PlantLibrary lib, InstantiatedSystem sys)
    : lib_(std::move(lib)), sys_(std::move(sys)) {
  if (sys_.components.size() != sys_.num_ugvs + 1) {
    throw ModelError("runtime needs one UAV component and one per UGV");
  }
  for (std::size_t c = 0; c < sys_.components.size(); ++c) {
    for (const auto& e : sys_.components[c].alphabet().events()) {
      auto [it, fresh] = index_.emplace(e.id, std::make_pair(c, e.controllable));
      if (!fresh) throw ModelError("event " + e.id + " shared by two components");
    }
  }
  for (const auto& [id, _] : index_) events_.push_back(id);
}

std::size_t RuntimeModel::component_of(std::string_view event) const {
  auto it = index_.find(event);
  if (it == index_.end()) throw InputError("unknown event " + std::string(event));
  return it->second.first;
}

bool RuntimeModel::known(std::string_view event) const {
  return index_.find(event) != index_.end();
}

bool RuntimeModel::controllable(std::string_view event) const {
  auto it = index_.find(event);
  if (it == index_.end()) throw InputError("unknown event " + std::string(event));
  return it->second.second;
}

const HybridAutomaton& RuntimeModel::hybrid(std::size_t robot) const {
  return robot == 0 ? lib_.uav : lib_.ugv;
}

const HybridEdge* RuntimeModel::edge(std::size_t robot, StateId mode,
                                     std::string_view event) const {
  const HybridAutomaton& h = hybrid(robot);
  auto e = h.skeleton.alphabet().find(base_event(event));
  if (!e) return nullptr;
  return h.edge(mode, *e);
}

// ------------------------------------------------------- SupervisorRuntime

SupervisorRuntime::SupervisorRuntime(std::shared_ptr<const RuntimeModel> model)
    : model_(std::move(model)) {
  for (const auto& c : model_->system().components) plant_.push_back(c.initial());
  for (const auto& s : model_->system().supervisors) {
    sup_.push_back(s.supervisor.initial());
  }
}

const std::string& SupervisorRuntime::mode_id(std::size_t robot) const {
  return model_->system().components[robot].state_id(plant_[robot]);
}

bool SupervisorRuntime::plant_eligible(std::string_view event) const {
  if (!model_->known(event)) return false;
  const std::size_t c = model_->component_of(event);
  const Fsa& g = model_->system().components[c];
  return g.next(plant_[c], *g.alphabet().find(event)).has_value();
}

bool SupervisorRuntime::disabled(std::string_view event) const {
  const auto& sups = model_->system().supervisors;
  for (std::size_t k = 0; k < sups.size(); ++k) {
    if (sups[k].pattern.disables(sup_[k], event)) return true;
  }
  return false;
}

std::vector<std::string> SupervisorRuntime::pattern() const {
  std::set<std::string> out;
  const auto& sups = model_->system().supervisors;
  for (std::size_t k = 0; k < sups.size(); ++k) {
    const auto& d = sups[k].pattern.disabled[sup_[k]];
    out.insert(d.begin(), d.end());
  }
  return {out.begin(), out.end()};
}

SupervisorRuntime step_supervisors(SupervisorRuntime rt, std::string_view event) {
  const RuntimeModel& m = *rt.model_;
  if (!rt.plant_eligible(event)) {
    throw ModelViolation(fmt::format("event {} is not eligible in the plant",
                                     event));
  }
  const bool ctrl = m.controllable(event);
  if (ctrl && rt.disabled(event)) {
    throw ExecutorBug(fmt::format("controllable event {} is disabled", event));
  }
  const std::size_t c = m.component_of(event);
  const Fsa& g = m.system().components[c];
  rt.plant_[c] = *g.next(rt.plant_[c], *g.alphabet().find(event));

  const auto& sups = m.system().supervisors;
  for (std::size_t k = 0; k < sups.size(); ++k) {
    const Fsa& s = sups[k].supervisor;
    auto e = s.alphabet().find(event);
    if (!e) continue;
    auto next = s.next(rt.sup_[k], *e);
    if (!next) {
      throw ModelViolation(fmt::format("supervisor {} cannot follow {}",
                                       s.name(), event));
    }
    rt.sup_[k] = *next;
  }
  return rt;
}

std::set<std::string> enabled_events(const SupervisorRuntime& rt) {
  std::set<std::string> out;
  for (const auto& e : rt.model().events()) {
    if (rt.model().controllable(e) && rt.plant_eligible(e) && !rt.disabled(e)) {
      out.insert(e);
    }
  }
  return out;
}

const std::vector<std::string>& default_priority() {
  static const std::vector<std::string> p = {
      "a27", "b7",  "b13", "a15", "b15", "a1",  "a3",
      "a5",  "a7",  "a9",  "a11", "b1",  "b21", "b23"};
  return p;
}

std::optional<std::string> select_action(const std::set<std::string>& enabled,
                                         const std::vector<std::string>& priority) {
  auto key = [&](const std::string& e) {
    const std::string base = base_event(e);
    auto it = std::find(priority.begin(), priority.end(), base);
    return std::make_tuple(static_cast<std::size_t>(it - priority.begin()),
                           event_robot(e), e);
  };
  std::optional<std::string> best;
  for (const auto& e : enabled) {
    if (!best || key(e) < key(*best)) best = e;
  }
  return best;
}

// ------------------------------------------------------------ closed loop

namespace {

bool is_ugv(const WorldState& w, std::size_t i) {
  return w.robots[i].kind == RobotKind::kUgv;
}

std::vector<Observation> observe_all(const LoopState& s, const LoopContext& ctx) {
  bool peers = true;
  for (std::size_t i = 0; i < s.world.size(); ++i) {
    if (is_ugv(s.world, i) && !s.missions[i].done) peers = false;
  }
  std::vector<Observation> out;
  out.reserve(s.world.size());
  for (std::size_t i = 0; i < s.world.size(); ++i) {
    out.push_back(observe(s.world, i, s.missions[i], ctx.plans[i], peers));
  }
  return out;
}

void apply_mission(MissionState& m, std::string_view base, double t) {
  if (base == "a18" || base == "b18") {
    m.pending = false;
    m.assigned = true;
    m.active = false;
    m.done = false;
  } else if (base == "a14" || base == "b1") {
    m.active = true;
    m.start_time = t;
  } else if (base == "a20" || base == "b20" || base == "a22") {
    m.active = false;
    m.done = true;
  } else if (base == "a29") {
    m.assigned = false;
  } else if (base == "b21") {
    m.assigned = false;
    m.active = false;
  }
}

// Cause of a detected event: the last condition of its guard, which is the
// event-specific part (the source invariant comes first).
std::pair<std::string, double> cause_of(const HybridEdge& e, const Observation& o) {
  if (e.guard.empty()) return {"command", 0.0};
  const Condition& c = e.guard.back();
  return {to_string(c.scalar), o[c.scalar]};
}

}  // namespace

std::vector<EventObservation> detect_events(const SupervisorRuntime& rt,
                                            std::span<const Observation> obs,
                                            double time) {
  const RuntimeModel& m = rt.model();
  std::vector<EventObservation> out;
  for (std::size_t r = 0; r < m.num_robots(); ++r) {
    const Fsa& g = m.system().components[r];
    for (const Transition& t : g.out(rt.mode(r))) {
      const EventDef& ev = g.alphabet()[t.event];
      if (ev.controllable) continue;
      const HybridEdge* e = m.edge(r, rt.mode(r), ev.id);
      if (e == nullptr || e->blocked || !holds(e->guard, obs[r])) continue;
      auto [cause, value] = cause_of(*e, obs[r]);
      out.push_back({time, ev.id, robot_name(r), cause, value});
    }
  }
  return out;
}

LoopState initial_loop_state(std::shared_ptr<const RuntimeModel> model,
                             WorldState world) {
  world.check();
  if (world.size() != model->num_robots()) {
    throw InputError("world and plant disagree on the number of robots");
  }
  const std::size_t n = world.size();
  for (std::size_t i = 0; i < n; ++i) world.vps[i] = make_vp(world.robots[i]);
  world.targets.assign(n, Vec3::Zero());
  for (std::size_t i = 0; i < n; ++i) world.targets[i] = world.vps[i].d;
  world.links.assign(n * n, 0);
  LoopState s{SupervisorRuntime(std::move(model)), std::move(world),
              std::vector<MissionState>(n),
              std::vector<std::vector<std::string>>(n), 0};
  return s;
}

std::pair<TermMask, Vec3> mode_command(const LoopState& s, const LoopContext& ctx,
                                       std::size_t i) {
  const RuntimeModel& m = s.rt.model();
  const std::string& field = m.hybrid(i).field_id[s.rt.mode(i)];
  const Vec3& d = s.world.vps[i].d;
  const Path& path = ctx.plans[i].path;
  const Vec3 on_path = path.at(s.missions[i].tau(s.world.time, path));
  if (field == "hold") return {TermMask{}, d};
  if (field == "ground") return {TermMask{false, false, true}, Vec3(d.x(), d.y(), 0.0)};
  if (field == "hover" || field == "track") return {TermMask{false, false, true}, on_path};
  if (field == "avoid") {
    return {TermMask{is_ugv(s.world, i), true, true}, on_path};
  }
  if (field == "formation") return {TermMask{true, false, true}, on_path};
  throw ModelError("unknown vector field " + field);
}

Sample make_sample(const LoopState& s) {
  Sample out;
  out.time = s.world.time;
  out.robots = s.world.robots;
  for (const auto& vp : s.world.vps) {
    out.vps.push_back(vp.d);
    out.vp_velocities.push_back(vp.last_velocity);
  }
  for (std::size_t i = 0; i < s.world.size(); ++i) out.modes.push_back(s.rt.mode_id(i));
  return out;
}

std::pair<LoopState, StepRecord> closed_loop_step(const LoopContext& ctx,
                                                  LoopState s) {
  const RuntimeModel& m = s.rt.model();
  const LoopConfig& cfg = ctx.config;
  const PlantParams& pp = m.library().params;
  const std::size_t n = s.world.size();
  if (ctx.plans.size() != n) throw InputError("one mission plan per robot expected");
  const double t = s.world.time;
  StepRecord rec;

  for (std::size_t i = 0; i < n; ++i) {
    MissionState& ms = s.missions[i];
    if (!ms.injected && t + 1e-9 >= ctx.plans[i].inject_time) {
      ms.injected = true;
      ms.pending = true;
    }
  }

  // Network links follow VP distances with the same hysteresis as the
  // connect/disconnect events.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!is_ugv(s.world, i) || !is_ugv(s.world, j)) continue;
      const double d = vp_distance(s.world, i, j);
      if (s.world.linked(i, j) && d > pp.hysteresis * pp.comm_radius) {
        s.world.set_link(i, j, false);
      } else if (!s.world.linked(i, j) && d <= pp.comm_radius) {
        s.world.set_link(i, j, true);
      }
    }
  }

  auto fire = [&](const std::string& event, const std::string& cause, double value) {
    const std::size_t r = m.component_of(event);
    const StateId before = s.rt.mode(r);
    s.rt = step_supervisors(std::move(s.rt), event);
    apply_mission(s.missions[r], base_event(event), t);
    if (s.rt.mode(r) != before) {
      s.kept[r].clear();
    } else if (m.controllable(event)) {
      s.kept[r].push_back(event);
    }
    rec.events.push_back({t, event, robot_name(r), cause, value});
  };

  auto obs = observe_all(s, ctx);
  for (const auto& c : detect_events(s.rt, obs, t)) {
    // An earlier event in this step may have moved the robot on.
    const std::size_t r = m.component_of(c.event);
    if (!s.rt.plant_eligible(c.event)) continue;
    const HybridEdge* e = m.edge(r, s.rt.mode(r), c.event);
    if (e == nullptr || !holds(e->guard, obs[r])) continue;
    fire(c.event, c.cause, c.value);
    obs = observe_all(s, ctx);
  }

  for (std::size_t r = 0; r < n; ++r) {
    std::set<std::string> ready;
    for (const auto& ev : enabled_events(s.rt)) {
      if (m.component_of(ev) != r) continue;
      const HybridEdge* e = m.edge(r, s.rt.mode(r), ev);
      if (e == nullptr || e->blocked || !holds(e->guard, obs[r])) continue;
      if (e->src == e->dst &&
          std::find(s.kept[r].begin(), s.kept[r].end(), ev) != s.kept[r].end()) {
        continue;
      }
      ready.insert(ev);
    }
    if (auto a = select_action(ready, cfg.priority)) {
      fire(*a, "supervisor", 0.0);
      obs = observe_all(s, ctx);
    }
  }

  for (std::size_t r = 0; r < n; ++r) {
    if (!holds(m.hybrid(r).invariant[s.rt.mode(r)], obs[r])) ++rec.invariant_violations;
  }

  std::vector<TermMask> masks(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto [mask, target] = mode_command(s, ctx, r);
    masks[r] = mask;
    s.world.targets[r] = target;
  }
  WorldState next = s.world;
  for (std::size_t r = 0; r < n; ++r) {
    next.vps[r] = vp_step(r, s.world, masks[r], cfg.swarm, cfg.dt);
  }
  const WorldState with_vps = next;
  for (std::size_t r = 0; r < n; ++r) {
    next.robots[r] = robot_track_vp(r, with_vps, cfg.uav, cfg.ugv, cfg.dt);
  }
  ++s.step;
  next.time = static_cast<double>(s.step) * cfg.dt;
  s.world = std::move(next);
  rec.sample = make_sample(s);
  return {std::move(s), std::move(rec)};
}

// ---------------------------------------------------------- verification

TraceVerdict verify_trace(std::shared_ptr<const RuntimeModel> model,
                          std::span<const std::string> events) {
  TraceVerdict v;
  SupervisorRuntime rt(model);
  std::size_t legal_len = events.size();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string& e = events[i];
    std::string reason;
    if (!model->known(e)) {
      reason = "unknown event " + e;
    } else if (!rt.plant_eligible(e)) {
      reason = fmt::format("{} is not eligible in mode {} of {}", e,
                           rt.mode_id(model->component_of(e)),
                           robot_name(model->component_of(e)));
    } else if (model->controllable(e) && rt.disabled(e)) {
      const auto& sups = model->system().supervisors;
      std::string who;
      for (std::size_t k = 0; k < sups.size(); ++k) {
        if (sups[k].pattern.disables(rt.supervisor_states()[k], e)) {
          who = sups[k].supervisor.name();
          break;
        }
      }
      reason = fmt::format("{} is disabled by {}", e, who);
    } else {
      try {
        rt = step_supervisors(std::move(rt), e);
      } catch (const Error& err) {
        reason = err.what();
      }
    }
    if (!reason.empty()) {
      v.legal = false;
      v.index = i;
      v.witness.assign(events.begin(), events.begin() + static_cast<long>(i) + 1);
      v.reason = std::move(reason);
      legal_len = i;
      break;
    }
  }
  const auto prefix = events.subspan(0, legal_len);
  for (const auto& mon : build_policies(model->system().num_ugvs)) {
    if (auto viol = check_string(mon, prefix)) v.policy_violations.push_back(*viol);
  }
  return v;
}

}  // namespace fieldsup
