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

#include "fieldsup/policies.hpp"

#include <deque>
#include <map>
#include <set>
#include <utility>

#include "fieldsup/errors.hpp"
#include "fieldsup/plants.hpp"

namespace fieldsup {
namespace {

struct Edge {
  std::string src, event, dst;
};

class MonitorBuilder {
 public:
  MonitorBuilder(std::string policy, std::string subject, std::string description)
      : policy_(std::move(policy)),
        subject_(std::move(subject)),
        description_(std::move(description)) {}

  MonitorBuilder& edge(std::string src, std::string event, std::string dst) {
    edges_.push_back({std::move(src), std::move(event), std::move(dst)});
    return *this;
  }
  // Event ignored by the monitor in state q but still part of its alphabet.
  MonitorBuilder& loop(const std::string& q, const std::string& event) {
    return edge(q, event, q);
  }
  MonitorBuilder& require(std::string q, std::string event) {
    required_.emplace_back(std::move(q), std::move(event));
    return *this;
  }

  PolicyMonitor build(const std::string& initial) {
    std::vector<EventDef> events;
    std::set<std::string> seen;
    auto table = event_table();
    for (const auto& e : edges_) {
      if (!seen.insert(e.event).second) continue;
      std::string base = base_event(e.event);
      bool found = false;
      for (const auto& row : table) {
        if (row.id == base) {
          events.push_back({e.event, row.controllable, row.label});
          found = true;
        }
      }
      if (!found) throw ModelError("monitor event '" + e.event + "' unknown");
    }
    FsaBuilder b(policy_ + "[" + subject_ + "]", Alphabet(std::move(events)));
    b.state(initial);
    for (const auto& e : edges_) {
      b.state(e.src);
      b.state(e.dst);
    }
    b.set_initial(initial);
    for (StateId s = 0; s < b.num_states(); ++s) b.mark(s);
    for (const auto& e : edges_) b.add_transition(e.src, e.event, e.dst);
    PolicyMonitor m;
    m.policy = policy_;
    m.subject = subject_;
    m.description = description_;
    m.monitor = std::move(b).build();
    m.must_enable.resize(m.monitor.num_states());
    for (const auto& [q, ev] : required_) {
      m.must_enable[*m.monitor.find_state(q)].push_back(ev);
    }
    return m;
  }

 private:
  std::string policy_, subject_, description_;
  std::vector<Edge> edges_;
  std::vector<std::pair<std::string, std::string>> required_;
};

}  // namespace

std::vector<PolicyMonitor> build_policies(std::size_t num_ugvs, bool suffixed) {
  if (!suffixed && num_ugvs != 1) {
    throw InputError("plain event ids support exactly one UGV");
  }
  auto ev = [&](const char* base, std::size_t i) {
    return suffixed ? instance_event(base, i) : std::string(base);
  };
  std::vector<PolicyMonitor> out;
  const std::string uav = robot_name(0);

  out.push_back(
      MonitorBuilder("POL1", uav, "take-off only while armed")
          .edge("disarmed", "a1", "armed").loop("disarmed", "a3")
          .loop("disarmed", "a29")
          .loop("armed", "a1").loop("armed", "a5")
          .edge("armed", "a3", "disarmed").edge("armed", "a29", "disarmed")
          .build("disarmed"));

  out.push_back(
      MonitorBuilder("POL2", uav,
                     "take-off only with a mission received while arming")
          .edge("none", "a18", "received").loop("none", "a29")
          .loop("received", "a18").edge("received", "a5", "none")
          .edge("received", "a29", "none")
          .build("none"));

  {
    // Bit i set: UGV i finished (or cleared) since its last receive.
    MonitorBuilder b("POL3", "team", "land only after every UGV finished");
    const std::size_t full = (std::size_t{1} << num_ugvs) - 1;
    auto name = [](std::size_t mask) { return "f" + std::to_string(mask); };
    for (std::size_t mask = 0; mask <= full; ++mask) {
      if (mask == full) b.loop(name(mask), "a7");
      for (std::size_t i = 1; i <= num_ugvs; ++i) {
        std::size_t bit = std::size_t{1} << (i - 1);
        b.edge(name(mask), ev("b20", i), name(mask | bit));
        b.edge(name(mask), ev("b21", i), name(mask | bit));
        b.edge(name(mask), ev("b18", i), name(mask & ~bit));
      }
    }
    out.push_back(b.build(name(0)));
  }

  for (std::size_t i = 1; i <= num_ugvs; ++i) {
    const std::string ugv = robot_name(i);
    auto e = [&](const char* base) { return ev(base, i); };

    out.push_back(
        MonitorBuilder("POL4", ugv, "keep formation only while connected")
            .edge("apart", e("b10"), "linked")
            .loop("apart", e("b12")).loop("apart", e("b4"))
            .loop("apart", e("b23")).loop("apart", e("b20"))
            .loop("linked", e("b10")).loop("linked", e("b13"))
            .edge("linked", e("b12"), "apart").edge("linked", e("b4"), "apart")
            .edge("linked", e("b23"), "apart").edge("linked", e("b20"), "apart")
            .build("apart"));

    out.push_back(
        MonitorBuilder("POL5", ugv, "receive and start only while stopped")
            .loop("stopped", e("b18")).edge("stopped", e("b1"), "moving")
            .loop("stopped", e("b20")).loop("stopped", e("b21"))
            .edge("moving", e("b20"), "stopped")
            .edge("moving", e("b21"), "stopped")
            .build("stopped"));

    out.push_back(
        MonitorBuilder("POL6", ugv, "finish a mission only in formation")
            .edge("apart", e("b10"), "linked")
            .loop("apart", e("b12")).loop("apart", e("b4"))
            .loop("apart", e("b23"))
            .loop("linked", e("b10"))
            .edge("linked", e("b12"), "apart").edge("linked", e("b4"), "apart")
            .edge("linked", e("b23"), "apart").edge("linked", e("b20"), "apart")
            .build("apart"));

    out.push_back(
        MonitorBuilder("POL7", ugv, "stay stopped after finishing")
            .loop("run", e("b1")).loop("run", e("b15")).loop("run", e("b13"))
            .loop("run", e("b7")).edge("run", e("b20"), "done")
            .edge("done", e("b1"), "run")
            .build("run"));

    out.push_back(
        MonitorBuilder("POL8", ugv, "avoidance has priority while obstructed")
            .edge("free", e("b4"), "obstructed").loop("free", e("b6"))
            .loop("free", e("b15")).loop("free", e("b13"))
            .loop("free", e("b21")).loop("free", e("b23"))
            .loop("free", e("b7"))
            .loop("obstructed", e("b7")).loop("obstructed", e("b4"))
            .edge("obstructed", e("b6"), "free")
            .require("obstructed", e("b7"))
            .build("free"));

    out.push_back(
        MonitorBuilder("POL9", ugv, "no mission received while one executes")
            .loop("idle", e("b18")).edge("idle", e("b1"), "busy")
            .edge("busy", e("b20"), "idle").edge("busy", e("b21"), "idle")
            .build("idle"));

    out.push_back(
        MonitorBuilder("POL10", ugv, "after finishing wait for a new mission")
            .loop("ready", e("b1")).loop("ready", e("b18"))
            .edge("ready", e("b20"), "wait")
            .loop("wait", e("b20")).edge("wait", e("b18"), "ready")
            .build("ready"));
  }

  out.push_back(
      MonitorBuilder("POL7", uav, "hover after finishing until landing")
          .loop("run", "a11").loop("run", "a7").edge("run", "a20", "done")
          .loop("done", "a20").edge("done", "a7", "run")
          .build("run"));

  out.push_back(
      MonitorBuilder("POL8", uav, "avoidance has priority while obstructed")
          .edge("free", "a24", "obstructed")
          .loop("free", "a26").loop("free", "a20").loop("free", "a22")
          .loop("free", "a27").loop("free", "a15").loop("free", "a7")
          .loop("free", "a11").loop("free", "a9")
          .loop("obstructed", "a27").loop("obstructed", "a24")
          .edge("obstructed", "a26", "free").edge("obstructed", "a20", "free")
          .edge("obstructed", "a22", "free")
          .require("obstructed", "a27")
          .build("free"));

  out.push_back(
      MonitorBuilder("POL9", uav,
                     "no mission received while one executes; landing aborts")
          .loop("idle", "a18").loop("idle", "a20").loop("idle", "a22")
          .loop("idle", "a7")
          .edge("idle", "a14", "busy")
          .edge("busy", "a20", "idle").edge("busy", "a22", "idle")
          .edge("busy", "a7", "idle")
          .loop("busy", "a14")
          .build("idle"));

  out.push_back(
      MonitorBuilder("POL10", uav, "after finishing wait for a new mission")
          .loop("ready", "a5").loop("ready", "a18")
          .edge("ready", "a20", "wait").edge("ready", "a22", "wait")
          .loop("wait", "a20").loop("wait", "a22")
          .edge("wait", "a18", "ready")
          .build("ready"));
  return out;
}

namespace {

struct Ctx {
  const PolicyMonitor& m;
  const Fsa& cl;
  std::vector<std::optional<EventId>> to_mon;   // cl event -> monitor event
  std::vector<std::vector<EventId>> required;   // monitor state -> cl events

  Ctx(const PolicyMonitor& mon, const Fsa& closed_loop) : m(mon), cl(closed_loop) {
    to_mon.resize(cl.alphabet().size());
    for (EventId e = 0; e < cl.alphabet().size(); ++e) {
      to_mon[e] = m.monitor.alphabet().find(cl.alphabet()[e].id);
    }
    required.resize(m.monitor.num_states());
    for (StateId q = 0; q < m.monitor.num_states(); ++q) {
      for (const auto& id : m.must_enable[q]) {
        auto e = cl.alphabet().find(id);
        if (!e) throw ModelError("required event '" + id + "' not in closed loop");
        required[q].push_back(*e);
      }
    }
  }

  PolicyViolation violation(EventString w, std::string detail) const {
    return {m.policy, m.subject, std::move(w), std::move(detail)};
  }

  std::optional<std::string> missing(StateId x, StateId q) const {
    for (EventId e : required[q]) {
      if (!cl.next(x, e)) return cl.alphabet()[e].id;
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<PolicyViolation> check_policy(const PolicyMonitor& m,
                                            const Fsa& cl) {
  if (cl.empty()) return std::nullopt;
  Ctx ctx(m, cl);
  using Key = std::pair<StateId, StateId>;
  std::map<Key, std::pair<Key, EventId>> parent;
  std::deque<Key> queue;
  Key start{cl.initial(), m.monitor.initial()};
  parent.emplace(start, std::make_pair(start, EventId{0}));
  queue.push_back(start);
  auto path = [&](Key k) {
    EventString w;
    while (k != start) {
      auto [prev, e] = parent.at(k);
      w.push_back(cl.alphabet()[e].id);
      k = prev;
    }
    return EventString(w.rbegin(), w.rend());
  };
  while (!queue.empty()) {
    Key k = queue.front();
    queue.pop_front();
    auto [x, q] = k;
    if (auto miss = ctx.missing(x, q)) {
      return ctx.violation(path(k), "'" + *miss + "' is not enabled");
    }
    for (const auto& t : cl.out(x)) {
      StateId nq = q;
      if (auto me = ctx.to_mon[t.event]) {
        auto n = m.monitor.next(q, *me);
        if (!n) {
          EventString w = path(k);
          w.push_back(cl.alphabet()[t.event].id);
          return ctx.violation(std::move(w), "'" + cl.alphabet()[t.event].id +
                                                 "' not allowed here");
        }
        nq = *n;
      }
      Key nk{t.target, nq};
      if (parent.try_emplace(nk, std::make_pair(k, t.event)).second) {
        queue.push_back(nk);
      }
    }
  }
  return std::nullopt;
}

std::optional<PolicyViolation> check_policy_bounded(const PolicyMonitor& m,
                                                    const Fsa& cl,
                                                    std::size_t max_len) {
  if (cl.empty()) return std::nullopt;
  Ctx ctx(m, cl);
  EventString prefix;
  std::optional<PolicyViolation> found;
  auto rec = [&](auto&& self, StateId x, StateId q) -> void {
    if (found) return;
    if (auto miss = ctx.missing(x, q)) {
      found = ctx.violation(prefix, "'" + *miss + "' is not enabled");
      return;
    }
    if (prefix.size() == max_len) return;
    for (const auto& t : cl.out(x)) {
      StateId nq = q;
      prefix.push_back(cl.alphabet()[t.event].id);
      if (auto me = ctx.to_mon[t.event]) {
        auto n = m.monitor.next(q, *me);
        if (!n) {
          found = ctx.violation(prefix, "'" + prefix.back() + "' not allowed here");
          return;
        }
        nq = *n;
      }
      self(self, t.target, nq);
      prefix.pop_back();
      if (found) return;
    }
  };
  rec(rec, cl.initial(), m.monitor.initial());
  return found;
}

std::optional<PolicyViolation> check_string(const PolicyMonitor& m,
                                            std::span<const std::string> s) {
  StateId q = m.monitor.initial();
  EventString w;
  for (const auto& id : s) {
    w.push_back(id);
    auto e = m.monitor.alphabet().find(id);
    if (!e) continue;
    auto n = m.monitor.next(q, *e);
    if (!n) return PolicyViolation{m.policy, m.subject, w, "'" + id + "' not allowed here"};
    q = *n;
  }
  return std::nullopt;
}

}  // namespace fieldsup
