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

#include "fieldsup/automaton.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "fieldsup/errors.hpp"

namespace fieldsup {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<EventDef> events) : events_(std::move(events)) {
  std::sort(events_.begin(), events_.end(),
            [](const EventDef& x, const EventDef& y) { return x.id < y.id; });
  for (std::size_t i = 1; i < events_.size(); ++i) {
    if (events_[i].id == events_[i - 1].id) {
      throw ModelError("duplicate event id '" + events_[i].id + "'");
    }
  }
  for (const auto& e : events_) {
    if (e.id.empty()) throw ModelError("empty event id");
  }
}

std::optional<EventId> Alphabet::find(std::string_view id) const {
  auto it = std::lower_bound(
      events_.begin(), events_.end(), id,
      [](const EventDef& e, std::string_view key) { return e.id < key; });
  if (it == events_.end() || it->id != id) return std::nullopt;
  return static_cast<EventId>(it - events_.begin());
}

Alphabet Alphabet::merged(const Alphabet& other) const {
  std::vector<EventDef> all = events_;
  for (const auto& e : other.events_) {
    if (auto idx = find(e.id)) {
      if (events_[*idx].controllable != e.controllable) {
        throw ModelError("event '" + e.id +
                         "' has conflicting controllability flags");
      }
      continue;
    }
    all.push_back(e);
  }
  return Alphabet(std::move(all));
}

bool Alphabet::subset_of(const Alphabet& other) const {
  return std::all_of(events_.begin(), events_.end(), [&](const EventDef& e) {
    auto idx = other.find(e.id);
    return idx && other[*idx].controllable == e.controllable;
  });
}

bool Alphabet::same_events(const Alphabet& other) const {
  return size() == other.size() && subset_of(other);
}

// --------------------------------------------------------------------- Fsa

Fsa Fsa::empty_over(std::string name, Alphabet alphabet) {
  Fsa f;
  f.name_ = std::move(name);
  f.alphabet_ = std::move(alphabet);
  return f;
}

std::size_t Fsa::num_transitions() const noexcept {
  std::size_t n = 0;
  for (const auto& row : delta_) n += row.size();
  return n;
}

std::size_t Fsa::num_marked() const noexcept {
  return static_cast<std::size_t>(
      std::count(marked_.begin(), marked_.end(), true));
}

std::optional<StateId> Fsa::find_state(std::string_view id) const {
  for (StateId s = 0; s < state_ids_.size(); ++s) {
    if (state_ids_[s] == id) return s;
  }
  return std::nullopt;
}

std::optional<StateId> Fsa::next(StateId s, EventId e) const {
  const auto& row = delta_[s];
  auto it = std::lower_bound(
      row.begin(), row.end(), e,
      [](const Transition& t, EventId key) { return t.event < key; });
  if (it == row.end() || it->event != e) return std::nullopt;
  return it->target;
}

Fsa Fsa::renamed(std::string name) const {
  Fsa f = *this;
  f.name_ = std::move(name);
  return f;
}

// -------------------------------------------------------------- FsaBuilder

FsaBuilder::FsaBuilder(std::string name, Alphabet alphabet) {
  fsa_.name_ = std::move(name);
  fsa_.alphabet_ = std::move(alphabet);
}

FsaBuilder& FsaBuilder::set_alphabet(Alphabet alphabet) {
  if (fsa_.num_transitions() > 0) {
    throw ModelError("alphabet cannot change after transitions were added");
  }
  fsa_.alphabet_ = std::move(alphabet);
  return *this;
}

StateId FsaBuilder::add_state(std::string id, std::string label) {
  if (id.empty()) throw ModelError("empty state id");
  if (index_.contains(id)) {
    throw ModelError("duplicate state id '" + id + "'");
  }
  auto s = static_cast<StateId>(fsa_.state_ids_.size());
  index_.emplace(id, s);
  fsa_.state_ids_.push_back(std::move(id));
  fsa_.state_labels_.push_back(std::move(label));
  fsa_.marked_.push_back(false);
  fsa_.delta_.emplace_back();
  return s;
}

StateId FsaBuilder::state(std::string_view id) {
  if (auto s = find_state(id)) return *s;
  return add_state(std::string(id));
}

std::optional<StateId> FsaBuilder::find_state(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateId FsaBuilder::require_state(std::string_view id) const {
  auto s = find_state(id);
  if (!s) throw ModelError("unknown state '" + std::string(id) + "'");
  return *s;
}

FsaBuilder& FsaBuilder::add_transition(StateId src, EventId event,
                                       StateId dst) {
  if (src >= fsa_.num_states() || dst >= fsa_.num_states()) {
    throw ModelError("transition endpoint out of range");
  }
  if (event >= fsa_.alphabet_.size()) {
    throw ModelError("transition event out of range");
  }
  auto& row = fsa_.delta_[src];
  auto it = std::lower_bound(
      row.begin(), row.end(), event,
      [](const Transition& t, EventId key) { return t.event < key; });
  if (it != row.end() && it->event == event) {
    if (it->target == dst) return *this;
    throw ModelError("nondeterministic transition from '" +
                     fsa_.state_ids_[src] + "' on '" +
                     fsa_.alphabet_[event].id + "'");
  }
  row.insert(it, Transition{event, dst});
  return *this;
}

FsaBuilder& FsaBuilder::add_transition(std::string_view src,
                                       std::string_view event,
                                       std::string_view dst) {
  auto e = fsa_.alphabet_.find(event);
  if (!e) throw ModelError("unknown event '" + std::string(event) + "'");
  return add_transition(require_state(src), *e, require_state(dst));
}

FsaBuilder& FsaBuilder::set_initial(StateId s) {
  if (s >= fsa_.num_states()) throw ModelError("initial state out of range");
  fsa_.initial_ = s;
  return *this;
}

FsaBuilder& FsaBuilder::set_initial(std::string_view id) {
  return set_initial(require_state(id));
}

FsaBuilder& FsaBuilder::mark(StateId s, bool marked) {
  if (s >= fsa_.num_states()) throw ModelError("marked state out of range");
  fsa_.marked_[s] = marked;
  return *this;
}

FsaBuilder& FsaBuilder::mark(std::string_view id) {
  return mark(require_state(id));
}

Fsa FsaBuilder::build() && {
  if (!fsa_.empty() && fsa_.initial_ == kNoState) {
    throw ModelError("automaton '" + fsa_.name_ + "' has no initial state");
  }
  index_.clear();
  return std::move(fsa_);
}

// ------------------------------------------------------------- operations

std::vector<bool> reachable_mask(const Fsa& a) {
  std::vector<bool> seen(a.num_states(), false);
  if (a.empty()) return seen;
  std::vector<StateId> stack{a.initial()};
  seen[a.initial()] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& t : a.out(s)) {
      if (!seen[t.target]) {
        seen[t.target] = true;
        stack.push_back(t.target);
      }
    }
  }
  return seen;
}

std::vector<bool> coreachable_mask(const Fsa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s) {
    for (const auto& t : a.out(s)) pred[t.target].push_back(s);
  }
  std::vector<bool> good(n, false);
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s) {
    if (a.is_marked(s)) {
      good[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : pred[s]) {
      if (!good[p]) {
        good[p] = true;
        stack.push_back(p);
      }
    }
  }
  return good;
}

Fsa restrict_to(const Fsa& a, const std::vector<bool>& keep) {
  if (a.empty() || !keep[a.initial()]) return Fsa::empty_over(a.name(), a.alphabet());
  // Reachability through kept states only.
  std::vector<bool> live(a.num_states(), false);
  std::vector<StateId> order{a.initial()};
  live[a.initial()] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& t : a.out(order[i])) {
      if (keep[t.target] && !live[t.target]) {
        live[t.target] = true;
        order.push_back(t.target);
      }
    }
  }
  // Preserve the original relative order of states for stable output.
  std::sort(order.begin(), order.end());
  FsaBuilder b(a.name(), a.alphabet());
  std::vector<StateId> remap(a.num_states(), kNoState);
  for (StateId s : order) {
    remap[s] = b.add_state(a.state_id(s), a.state_label(s));
    if (a.is_marked(s)) b.mark(remap[s]);
  }
  for (StateId s : order) {
    for (const auto& t : a.out(s)) {
      if (live[t.target]) b.add_transition(remap[s], t.event, remap[t.target]);
    }
  }
  b.set_initial(remap[a.initial()]);
  return std::move(b).build();
}

Fsa accessible(const Fsa& a) { return restrict_to(a, reachable_mask(a)); }

Fsa coaccessible(const Fsa& a) {
  if (a.empty()) return a;
  auto keep = coreachable_mask(a);
  if (!keep[a.initial()]) return Fsa::empty_over(a.name(), a.alphabet());
  // Unlike restrict_to, keep coaccessible states even if unreachable.
  FsaBuilder b(a.name(), a.alphabet());
  std::vector<StateId> remap(a.num_states(), kNoState);
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (!keep[s]) continue;
    remap[s] = b.add_state(a.state_id(s), a.state_label(s));
    if (a.is_marked(s)) b.mark(remap[s]);
  }
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (!keep[s]) continue;
    for (const auto& t : a.out(s)) {
      if (keep[t.target]) b.add_transition(remap[s], t.event, remap[t.target]);
    }
  }
  b.set_initial(remap[a.initial()]);
  return std::move(b).build();
}

Fsa trim(const Fsa& a) { return accessible(coaccessible(a)); }

bool is_nonblocking(const Fsa& a) {
  auto reach = reachable_mask(a);
  auto coreach = coreachable_mask(a);
  for (std::size_t s = 0; s < reach.size(); ++s) {
    if (reach[s] && !coreach[s]) return false;
  }
  return true;
}

std::vector<EventId> to_indices(const Fsa& a, std::span<const std::string> s) {
  std::vector<EventId> out;
  out.reserve(s.size());
  for (const auto& id : s) {
    auto e = a.alphabet().find(id);
    if (!e) throw InputError("event '" + id + "' is not in the alphabet of '" + a.name() + "'");
    out.push_back(*e);
  }
  return out;
}

bool language_contains(const Fsa& a, std::span<const std::string> s,
                       bool marked_only) {
  auto events = to_indices(a, s);
  if (a.empty()) return false;
  StateId x = a.initial();
  for (EventId e : events) {
    auto y = a.next(x, e);
    if (!y) return false;
    x = *y;
  }
  return !marked_only || a.is_marked(x);
}

namespace {

// Event indices sorted by id are already lexicographic, so a DFS visiting
// transitions in index order yields strings in lexicographic order once the
// final list is sorted by the usual vector-of-string ordering.
void enumerate_rec(const Fsa& a, StateId x, std::size_t max_len,
                   bool marked_only, EventString& prefix,
                   std::vector<EventString>& out) {
  if (!marked_only || a.is_marked(x)) out.push_back(prefix);
  if (prefix.size() == max_len) return;
  for (const auto& t : a.out(x)) {
    prefix.push_back(a.alphabet()[t.event].id);
    enumerate_rec(a, t.target, max_len, marked_only, prefix, out);
    prefix.pop_back();
  }
}

std::vector<EventString> enumerate(const Fsa& a, std::size_t max_len,
                                   bool marked_only) {
  std::vector<EventString> out;
  if (a.empty()) return out;
  EventString prefix;
  enumerate_rec(a, a.initial(), max_len, marked_only, prefix, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<EventString> enumerate_language(const Fsa& a, std::size_t max_len) {
  return enumerate(a, max_len, false);
}

std::vector<EventString> enumerate_marked_language(const Fsa& a,
                                                   std::size_t max_len) {
  return enumerate(a, max_len, true);
}

EventString project(std::span<const std::string> s,
                    const std::set<std::string, std::less<>>& observable) {
  EventString out;
  for (const auto& e : s) {
    if (observable.contains(e)) out.push_back(e);
  }
  return out;
}

Fsa lift(const Fsa& a, const Alphabet& alphabet) {
  Alphabet full = a.alphabet().merged(alphabet);
  FsaBuilder b(a.name(), full);
  for (StateId s = 0; s < a.num_states(); ++s) {
    b.add_state(a.state_id(s), a.state_label(s));
    if (a.is_marked(s)) b.mark(s);
  }
  for (StateId s = 0; s < a.num_states(); ++s) {
    for (const auto& t : a.out(s)) {
      b.add_transition(s, *full.find(a.alphabet()[t.event].id), t.target);
    }
    for (EventId e = 0; e < full.size(); ++e) {
      if (!a.alphabet().contains(full[e].id)) b.add_transition(s, e, s);
    }
  }
  if (!a.empty()) b.set_initial(a.initial());
  return std::move(b).build();
}

Fsa rename_events(const Fsa& a,
                  const std::map<std::string, std::string, std::less<>>& mapping,
                  std::string name) {
  std::vector<EventDef> defs;
  for (const auto& e : a.alphabet().events()) {
    EventDef d = e;
    if (auto it = mapping.find(e.id); it != mapping.end()) d.id = it->second;
    defs.push_back(std::move(d));
  }
  Alphabet renamed(std::move(defs));
  FsaBuilder b(name.empty() ? a.name() : std::move(name), renamed);
  for (StateId s = 0; s < a.num_states(); ++s) {
    b.add_state(a.state_id(s), a.state_label(s));
    if (a.is_marked(s)) b.mark(s);
  }
  for (StateId s = 0; s < a.num_states(); ++s) {
    for (const auto& t : a.out(s)) {
      const auto& id = a.alphabet()[t.event].id;
      auto it = mapping.find(id);
      b.add_transition(s, *renamed.find(it == mapping.end() ? id : it->second),
                       t.target);
    }
  }
  if (!a.empty()) b.set_initial(a.initial());
  return std::move(b).build();
}

namespace {

bool equivalent_impl(const Fsa& a, const Fsa& b, std::size_t max_len) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  // Map a's event indices onto b's.
  std::vector<std::optional<EventId>> to_b(a.alphabet().size());
  for (EventId e = 0; e < a.alphabet().size(); ++e) {
    to_b[e] = b.alphabet().find(a.alphabet()[e].id);
  }
  std::map<std::pair<StateId, StateId>, std::size_t> depth;
  std::deque<std::pair<StateId, StateId>> queue;
  depth[{a.initial(), b.initial()}] = 0;
  queue.emplace_back(a.initial(), b.initial());
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    if (a.is_marked(x) != b.is_marked(y)) return false;
    std::size_t d = depth[{x, y}];
    if (d == max_len) continue;
    std::size_t count_b = b.out(y).size();
    std::size_t matched = 0;
    for (const auto& t : a.out(x)) {
      if (!to_b[t.event]) return false;
      auto yn = b.next(y, *to_b[t.event]);
      if (!yn) return false;
      ++matched;
      std::pair<StateId, StateId> key{t.target, *yn};
      if (!depth.contains(key)) {
        depth[key] = d + 1;
        queue.push_back(key);
      }
    }
    if (matched != count_b) return false;
  }
  return true;
}

}  // namespace

bool language_equivalent(const Fsa& a, const Fsa& b) {
  return equivalent_impl(a, b, std::numeric_limits<std::size_t>::max());
}

bool language_equivalent_upto(const Fsa& a, const Fsa& b, std::size_t max_len) {
  return equivalent_impl(a, b, max_len);
}

std::optional<EventString> shortest_path_to(const Fsa& a, StateId target) {
  if (a.empty()) return std::nullopt;
  std::vector<std::pair<StateId, EventId>> parent(
      a.num_states(), {kNoState, 0});
  std::vector<bool> seen(a.num_states(), false);
  std::deque<StateId> queue{a.initial()};
  seen[a.initial()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    if (s == target) {
      EventString path;
      for (StateId x = s; x != a.initial(); x = parent[x].first) {
        path.push_back(a.alphabet()[parent[x].second].id);
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& t : a.out(s)) {
      if (!seen[t.target]) {
        seen[t.target] = true;
        parent[t.target] = {s, t.event};
        queue.push_back(t.target);
      }
    }
  }
  return std::nullopt;
}

}  // namespace fieldsup
