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

#ifndef FIELDSUP_AUTOMATON_HPP_
#define FIELDSUP_AUTOMATON_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fieldsup {

using StateId = std::uint32_t;
using EventId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

/// A finite string of event ids. The empty sequence is the null string.
using EventString = std::vector<std::string>;

struct EventDef {
  std::string id;
  bool controllable = false;
  std::string label;

  friend bool operator==(const EventDef&, const EventDef&) = default;
};

/// Ordered set of events, sorted by id. Event indices (EventId) refer to
/// positions in this order and are stable for a given alphabet value.
class Alphabet {
 public:
  Alphabet() = default;
  /// Throws ModelError on duplicate ids.
  explicit Alphabet(std::vector<EventDef> events);

  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const EventDef& operator[](EventId e) const { return events_[e]; }
  const std::vector<EventDef>& events() const noexcept { return events_; }

  std::optional<EventId> find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id).has_value(); }
  bool controllable(EventId e) const { return events_[e].controllable; }

  /// Union of two alphabets. Shared ids must agree on controllability.
  Alphabet merged(const Alphabet& other) const;
  /// True when every id of `this` is in `other` with the same flag.
  bool subset_of(const Alphabet& other) const;
  /// Same ids and controllability flags (labels are ignored).
  bool same_events(const Alphabet& other) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<EventDef> events_;
};

struct Transition {
  EventId event;
  StateId target;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Deterministic finite-state automaton over a controllability-partitioned
/// alphabet. The transition function is partial: an undefined (state, event)
/// pair means the event is not eligible there. Values are immutable; build
/// them with FsaBuilder or the operations below.
///
/// An automaton with zero states is the empty automaton; it generates no
/// strings at all (not even the null string).
class Fsa {
 public:
  Fsa() = default;

  static Fsa empty_over(std::string name, Alphabet alphabet);

  const std::string& name() const noexcept { return name_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }

  bool empty() const noexcept { return state_ids_.empty(); }
  std::size_t num_states() const noexcept { return state_ids_.size(); }
  std::size_t num_transitions() const noexcept;
  StateId initial() const noexcept { return initial_; }
  bool is_marked(StateId s) const { return marked_[s]; }
  std::size_t num_marked() const noexcept;

  const std::string& state_id(StateId s) const { return state_ids_[s]; }
  const std::string& state_label(StateId s) const { return state_labels_[s]; }
  std::optional<StateId> find_state(std::string_view id) const;

  std::optional<StateId> next(StateId s, EventId e) const;
  /// Outgoing transitions of `s`, sorted by event index.
  std::span<const Transition> out(StateId s) const { return delta_[s]; }

  /// Same automaton with a different name.
  Fsa renamed(std::string name) const;

 private:
  friend class FsaBuilder;

  std::string name_;
  Alphabet alphabet_;
  std::vector<std::string> state_ids_;
  std::vector<std::string> state_labels_;
  std::vector<bool> marked_;
  std::vector<std::vector<Transition>> delta_;
  StateId initial_ = kNoState;
};

/// Incremental, validating constructor for Fsa.
class FsaBuilder {
 public:
  explicit FsaBuilder(std::string name = {}, Alphabet alphabet = {});

  /// Replaces the alphabet. Only allowed before any transition is added.
  FsaBuilder& set_alphabet(Alphabet alphabet);
  const Alphabet& alphabet() const noexcept { return fsa_.alphabet_; }

  /// Throws ModelError when the id already exists.
  StateId add_state(std::string id, std::string label = {});
  /// Returns the existing state or creates it.
  StateId state(std::string_view id);
  std::optional<StateId> find_state(std::string_view id) const;
  std::size_t num_states() const noexcept { return fsa_.num_states(); }

  /// Throws ModelError on nondeterminism, unknown event or unknown state.
  FsaBuilder& add_transition(StateId src, EventId event, StateId dst);
  FsaBuilder& add_transition(std::string_view src, std::string_view event,
                             std::string_view dst);
  FsaBuilder& set_initial(StateId s);
  FsaBuilder& set_initial(std::string_view id);
  FsaBuilder& mark(StateId s, bool marked = true);
  FsaBuilder& mark(std::string_view id);

  /// Validates (initial defined when states exist) and returns the value.
  Fsa build() &&;

 private:
  StateId require_state(std::string_view id) const;

  Fsa fsa_;
  std::map<std::string, StateId, std::less<>> index_;
};

// Structural operations. All are pure.

Fsa accessible(const Fsa& a);
Fsa coaccessible(const Fsa& a);
Fsa trim(const Fsa& a);
bool is_nonblocking(const Fsa& a);

/// Reachable states from the initial state, as a membership mask.
std::vector<bool> reachable_mask(const Fsa& a);
/// States from which a marked state is reachable.
std::vector<bool> coreachable_mask(const Fsa& a);
/// Sub-automaton on `keep` states, restricted to the part reachable from
/// the initial state through kept states. Empty if the initial is dropped.
Fsa restrict_to(const Fsa& a, const std::vector<bool>& keep);

/// Membership of `s` in L(a), or in L_m(a) when `marked_only`.
/// Throws InputError if `s` mentions an event outside the alphabet.
bool language_contains(const Fsa& a, std::span<const std::string> s,
                       bool marked_only);

/// All strings of L(a) with length <= max_len, sorted lexicographically by
/// event id sequence.
std::vector<EventString> enumerate_language(const Fsa& a, std::size_t max_len);
/// All strings of L_m(a) with length <= max_len, same ordering.
std::vector<EventString> enumerate_marked_language(const Fsa& a,
                                                   std::size_t max_len);

/// Natural projection: erases events not in `observable`.
EventString project(std::span<const std::string> s,
                    const std::set<std::string, std::less<>>& observable);

/// Extends `a` to `alphabet` by self-looping every absent event at every
/// state. Throws ModelError if alphabets disagree on a shared id.
Fsa lift(const Fsa& a, const Alphabet& alphabet);

/// Renames events according to `mapping` (ids not in the map are kept).
Fsa rename_events(const Fsa& a,
                  const std::map<std::string, std::string, std::less<>>& mapping,
                  std::string name = {});

/// L(a) = L(b) and L_m(a) = L_m(b). Alphabets must contain the same ids.
bool language_equivalent(const Fsa& a, const Fsa& b);
/// Same comparison restricted to strings of length <= max_len.
bool language_equivalent_upto(const Fsa& a, const Fsa& b, std::size_t max_len);

/// Converts event ids to indices; throws InputError on unknown ids.
std::vector<EventId> to_indices(const Fsa& a, std::span<const std::string> s);
/// Shortest string reaching `target` from the initial state (BFS), if any.
std::optional<EventString> shortest_path_to(const Fsa& a, StateId target);

}  // namespace fieldsup

#endif  // FIELDSUP_AUTOMATON_HPP_
