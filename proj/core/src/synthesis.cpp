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

#include "fieldsup/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

#include "fieldsup/errors.hpp"

namespace fieldsup {
namespace {

struct Product {
  Fsa fsa;
  std::vector<std::pair<StateId, StateId>> pairs;
};

// Accessible product over `sigma`. An event outside an operand's alphabet
// leaves that operand where it is.
Product product(const Fsa& a, const Fsa& b, const Alphabet& sigma,
                std::string name) {
  Product p;
  FsaBuilder builder(std::move(name), sigma);
  if (a.empty() || b.empty()) {
    p.fsa = std::move(builder).build();
    return p;
  }
  std::vector<std::optional<EventId>> in_a(sigma.size()), in_b(sigma.size());
  for (EventId e = 0; e < sigma.size(); ++e) {
    in_a[e] = a.alphabet().find(sigma[e].id);
    in_b[e] = b.alphabet().find(sigma[e].id);
  }
  std::map<std::pair<StateId, StateId>, StateId> index;
  auto visit = [&](StateId x, StateId y) {
    auto [it, fresh] = index.try_emplace({x, y}, 0);
    if (fresh) {
      it->second = builder.add_state(a.state_id(x) + "." + b.state_id(y));
      if (a.is_marked(x) && b.is_marked(y)) builder.mark(it->second);
      p.pairs.emplace_back(x, y);
    }
    return it->second;
  };
  visit(a.initial(), b.initial());
  for (std::size_t i = 0; i < p.pairs.size(); ++i) {
    auto [x, y] = p.pairs[i];
    auto from = static_cast<StateId>(i);
    for (EventId e = 0; e < sigma.size(); ++e) {
      StateId nx = x, ny = y;
      if (in_a[e]) {
        auto t = a.next(x, *in_a[e]);
        if (!t) continue;
        nx = *t;
      }
      if (in_b[e]) {
        auto t = b.next(y, *in_b[e]);
        if (!t) continue;
        ny = *t;
      }
      builder.add_transition(from, e, visit(nx, ny));
    }
  }
  builder.set_initial(0);
  p.fsa = std::move(builder).build();
  return p;
}

// Lifts `k` onto g's alphabet. Events of k outside g are a model error.
Fsa lift_onto(const Fsa& k, const Fsa& g) {
  if (!k.alphabet().subset_of(g.alphabet())) {
    throw ModelError("alphabet of '" + k.name() +
                     "' is not contained in the alphabet of '" + g.name() + "'");
  }
  if (k.alphabet().same_events(g.alphabet())) return k;
  return lift(k, g.alphabet());
}

EventString path_to(const std::vector<std::pair<StateId, EventId>>& parent,
                    const Fsa& a, StateId s) {
  EventString out;
  for (StateId x = s; x != a.initial(); x = parent[x].first) {
    out.push_back(a.alphabet()[parent[x].second].id);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Shortest string from the initial state to any state with bad[s] set.
std::optional<EventString> shortest_to_any(const Fsa& a,
                                           const std::vector<bool>& bad) {
  if (a.empty()) return std::nullopt;
  std::vector<std::pair<StateId, EventId>> parent(a.num_states(),
                                                  {kNoState, 0});
  std::vector<bool> seen(a.num_states(), false);
  std::deque<StateId> queue{a.initial()};
  seen[a.initial()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (bad[s]) return path_to(parent, a, s);
    for (const auto& t : a.out(s)) {
      if (seen[t.target]) continue;
      seen[t.target] = true;
      parent[t.target] = {s, t.event};
      queue.push_back(t.target);
    }
  }
  return std::nullopt;
}

}  // namespace

Fsa sync(const Fsa& a, const Fsa& b) {
  Alphabet sigma = a.alphabet().merged(b.alphabet());
  return product(a, b, sigma, a.name() + "||" + b.name()).fsa;
}

Fsa sync_all(std::span<const Fsa> automata) {
  if (automata.empty()) throw ModelError("sync of an empty list");
  Fsa acc = automata.front();
  for (std::size_t i = 1; i < automata.size(); ++i) acc = sync(acc, automata[i]);
  return acc;
}

Fsa meet(const Fsa& a, const Fsa& b) {
  if (!a.alphabet().same_events(b.alphabet())) {
    throw ModelError("meet of '" + a.name() + "' and '" + b.name() +
                     "' needs identical alphabets");
  }
  return product(a, b, a.alphabet(), a.name() + "^" + b.name()).fsa;
}

Fsa supervised_product(const Fsa& s, const Fsa& g) {
  return product(lift_onto(s, g), g, g.alphabet(), s.name() + "/" + g.name()).fsa;
}

ControllabilityVerdict is_controllable(const Fsa& k, const Fsa& g) {
  ControllabilityVerdict v;
  Fsa kk = lift_onto(k, g);
  if (kk.empty() || g.empty()) return v;
  const Alphabet& sigma = g.alphabet();
  Product p = product(kk, g, sigma, "check");
  // BFS order of `product` gives shortest paths; recover them with parents.
  std::vector<std::pair<StateId, EventId>> parent(p.fsa.num_states(),
                                                  {kNoState, 0});
  std::vector<bool> seen(p.fsa.num_states(), false);
  std::deque<StateId> queue{p.fsa.initial()};
  seen[p.fsa.initial()] = true;
  while (!queue.empty()) {
    StateId x = queue.front();
    queue.pop_front();
    auto [ks, gs] = p.pairs[x];
    for (const auto& t : g.out(gs)) {
      if (sigma.controllable(t.event)) continue;
      if (!kk.next(ks, t.event)) {
        v.controllable = false;
        v.prefix = path_to(parent, p.fsa, x);
        v.event = sigma[t.event].id;
        return v;
      }
    }
    for (const auto& t : p.fsa.out(x)) {
      if (seen[t.target]) continue;
      seen[t.target] = true;
      parent[t.target] = {x, t.event};
      queue.push_back(t.target);
    }
  }
  return v;
}

Fsa supcon(const Fsa& g, const Fsa& k) {
  Fsa kk = lift_onto(k, g);
  const Alphabet& sigma = g.alphabet();
  Product p = product(g, kk, sigma, k.name().empty() ? "supcon" : k.name());
  const Fsa& f = p.fsa;
  const std::size_t n = f.num_states();
  if (n == 0) return f;

  std::vector<std::vector<StateId>> pred(n);
  for (StateId x = 0; x < n; ++x) {
    for (const auto& t : f.out(x)) pred[t.target].push_back(x);
  }

  std::vector<bool> good(n, true);
  for (;;) {
    bool changed = false;
    // Uncontrollable events the plant allows must stay inside `good`.
    for (StateId x = 0; x < n; ++x) {
      if (!good[x]) continue;
      for (const auto& t : g.out(p.pairs[x].first)) {
        if (sigma.controllable(t.event)) continue;
        auto y = f.next(x, t.event);
        if (!y || !good[*y]) {
          good[x] = false;
          changed = true;
          break;
        }
      }
    }
    // Coreachability inside `good`.
    std::vector<bool> co(n, false);
    std::vector<StateId> stack;
    for (StateId x = 0; x < n; ++x) {
      if (good[x] && f.is_marked(x)) {
        co[x] = true;
        stack.push_back(x);
      }
    }
    while (!stack.empty()) {
      StateId x = stack.back();
      stack.pop_back();
      for (StateId y : pred[x]) {
        if (good[y] && !co[y]) {
          co[y] = true;
          stack.push_back(y);
        }
      }
    }
    for (StateId x = 0; x < n; ++x) {
      if (good[x] && !co[x]) {
        good[x] = false;
        changed = true;
      }
    }
    if (!good[f.initial()]) return Fsa::empty_over(f.name(), sigma);
    // Reachability inside `good`.
    std::vector<bool> re(n, false);
    stack.assign(1, f.initial());
    re[f.initial()] = true;
    while (!stack.empty()) {
      StateId x = stack.back();
      stack.pop_back();
      for (const auto& t : f.out(x)) {
        if (good[t.target] && !re[t.target]) {
          re[t.target] = true;
          stack.push_back(t.target);
        }
      }
    }
    for (StateId x = 0; x < n; ++x) {
      if (good[x] && !re[x]) {
        good[x] = false;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return restrict_to(f, good);
}

NonconflictVerdict check_nonconflict(std::span<const Fsa> supervisors,
                                     const Fsa& g) {
  Fsa cl = g;
  for (const auto& s : supervisors) {
    cl = product(cl, lift_onto(s, g), g.alphabet(), "closed_loop").fsa;
  }
  NonconflictVerdict v;
  v.closed_loop_states = cl.num_states();
  auto co = coreachable_mask(cl);
  std::vector<bool> bad(co.size());
  for (std::size_t i = 0; i < co.size(); ++i) bad[i] = !co[i];
  if (auto w = shortest_to_any(cl, bad)) {
    v.nonconflicting = false;
    v.witness = std::move(*w);
  }
  return v;
}

bool ControlPattern::disables(StateId s, std::string_view event) const {
  const auto& row = disabled.at(s);
  return std::binary_search(row.begin(), row.end(), event);
}

ControlPattern control_data(const Fsa& s, const Fsa& g) {
  Fsa ss = lift_onto(s, g);
  ControlPattern cp;
  cp.supervisor = s.name();
  cp.disabled.resize(ss.num_states());
  Product p = product(ss, g, g.alphabet(), "pattern");
  std::vector<std::set<std::string, std::less<>>> sets(ss.num_states());
  for (const auto& [xs, xg] : p.pairs) {
    for (const auto& t : g.out(xg)) {
      if (!g.alphabet().controllable(t.event)) continue;
      if (!ss.next(xs, t.event)) sets[xs].insert(g.alphabet()[t.event].id);
    }
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    cp.disabled[i].assign(sets[i].begin(), sets[i].end());
  }
  return cp;
}

const char* to_string(Provenance p) {
  return p == Provenance::kVerbatim ? "verbatim" : "supcon";
}

ModularSupervisorSet modular_synthesis(std::span<const Fsa> subplants,
                                       std::span<const SpecInput> specs,
                                       bool allow_conflict) {
  if (subplants.empty()) throw InputError("no subplants given");
  ModularSupervisorSet out;
  for (const auto& in : specs) {
    if (in.subplant >= subplants.size()) {
      throw InputError("spec '" + in.spec.name() + "' references subplant " +
                       std::to_string(in.subplant) + " of " +
                       std::to_string(subplants.size()));
    }
    const Fsa& g = subplants[in.subplant];
    const Fsa& h = in.spec;
    SpecReport rep;
    rep.name = h.name();
    rep.subplant = in.subplant;
    rep.spec_states = h.num_states();

    Fsa lifted = lift_onto(h, g);
    Fsa k = meet(g, lifted);
    rep.k_states = k.num_states();
    // Step 3: controllability of K w.r.t. the subplant.
    rep.controllability = is_controllable(lifted, g);
    // Step 4: the specification itself is nonblocking.
    rep.nonblocking = is_nonblocking(h);
    if (!rep.nonblocking) {
      auto co = coreachable_mask(h);
      std::vector<bool> bad(co.size());
      for (std::size_t i = 0; i < co.size(); ++i) bad[i] = !co[i];
      rep.blocking_witness = shortest_to_any(h, bad).value_or(EventString{});
    }
    // Step 5: nonconflict of K with its own subplant.
    rep.nonconflicting = is_nonblocking(k);

    Fsa sup = supcon(g, lifted);
    if (sup.empty()) {
      throw SynthesisFailure(h.name(), "supremal controllable sublanguage of '" +
                                           h.name() + "' is empty");
    }
    // Step 8: does the supremal closed loop coincide with K's?
    rep.supcon_matches_k = language_equivalent(sup, trim(k));
    bool admit = rep.controllability.controllable && rep.nonblocking &&
                 rep.nonconflicting;
    if (admit && !rep.supcon_matches_k) {
      throw ExecutorBug("spec '" + h.name() +
                        "' passed all checks but differs from its supremal "
                        "sublanguage");
    }
    rep.provenance = admit ? Provenance::kVerbatim : Provenance::kSupcon;
    Fsa chosen = admit ? h : sup.renamed("S_" + h.name());
    rep.supervisor_states = chosen.num_states();

    out.patterns.push_back(control_data(chosen, g));
    out.supervisors.push_back(std::move(chosen));
    out.provenance.push_back(rep.provenance);
    out.subplant.push_back(in.subplant);
    out.reports.push_back(std::move(rep));
  }

  Fsa plant = sync_all(subplants);
  out.nonconflict = check_nonconflict(out.supervisors, plant);
  if (!out.nonconflict.nonconflicting && !allow_conflict) {
    std::string w;
    for (const auto& e : out.nonconflict.witness) w += (w.empty() ? "" : " ") + e;
    throw ConflictError("modular supervisors conflict; blocking string: [" + w +
                        "]");
  }
  return out;
}

nlohmann::json to_json(const ModularSupervisorSet& set) {
  using nlohmann::json;
  json specs = json::array();
  for (std::size_t j = 0; j < set.reports.size(); ++j) {
    const SpecReport& r = set.reports[j];
    json c = {{"controllable", r.controllability.controllable}};
    if (!r.controllability.controllable) {
      c["counterexample"] = {{"prefix", r.controllability.prefix},
                             {"event", r.controllability.event}};
    }
    json entry = {{"spec", r.name},
                  {"subplant", r.subplant},
                  {"spec_states", r.spec_states},
                  {"k_states", r.k_states},
                  {"supervisor_states", r.supervisor_states},
                  {"controllability", c},
                  {"nonblocking", r.nonblocking},
                  {"nonconflicting", r.nonconflicting},
                  {"supcon_matches_k", r.supcon_matches_k},
                  {"provenance", to_string(r.provenance)}};
    if (!r.nonblocking) entry["blocking_witness"] = r.blocking_witness;
    if (j < set.patterns.size() && j < set.supervisors.size()) {
      json table = json::object();
      const auto& p = set.patterns[j];
      for (StateId x = 0; x < p.disabled.size(); ++x) {
        if (!p.disabled[x].empty()) {
          table[set.supervisors[j].state_id(x)] = p.disabled[x];
        }
      }
      entry["supervisor"] = set.supervisors[j].name();
      entry["disabled"] = std::move(table);
    }
    specs.push_back(std::move(entry));
  }
  json nc = {{"nonconflicting", set.nonconflict.nonconflicting},
             {"closed_loop_states", set.nonconflict.closed_loop_states}};
  if (!set.nonconflict.nonconflicting) nc["witness"] = set.nonconflict.witness;
  return {{"specs", std::move(specs)}, {"nonconflict", std::move(nc)}};
}

Fsa centralized_supervisor(const Fsa& g, std::span<const Fsa> specs) {
  Fsa k = g;
  for (const auto& h : specs) k = meet(k, lift_onto(h, g));
  return supcon(g, k.renamed("central"));
}

}  // namespace fieldsup
