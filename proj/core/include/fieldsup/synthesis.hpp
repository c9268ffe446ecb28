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

#ifndef FIELDSUP_SYNTHESIS_HPP_
#define FIELDSUP_SYNTHESIS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fieldsup/automaton.hpp"

namespace fieldsup {

/// Synchronous composition. Shared events move jointly, private events
/// interleave. The result is accessible; composite state ids are "x.y".
/// Throws ModelError on a controllability conflict.
Fsa sync(const Fsa& a, const Fsa& b);
/// Left fold of sync. Throws ModelError on an empty list.
Fsa sync_all(std::span<const Fsa> automata);

/// Product over a common alphabet: L(a) ∩ L(b), L_m(a) ∩ L_m(b).
/// Throws ModelError if the alphabets differ.
Fsa meet(const Fsa& a, const Fsa& b);

/// Closed loop S/G. A supervisor over a sub-alphabet of g is lifted first;
/// any other alphabet mismatch is a ModelError.
Fsa supervised_product(const Fsa& s, const Fsa& g);

struct ControllabilityVerdict {
  bool controllable = true;
  // Set when not controllable: s ∈ L(k) and uncontrollable υ with
  // sυ ∈ L(g) but sυ ∉ L(k). The prefix is a shortest such s.
  EventString prefix;
  std::string event;
};

/// Checks controllability of L(k) w.r.t. g. k may be over a
/// sub-alphabet of g, in which case it is lifted.
ControllabilityVerdict is_controllable(const Fsa& k, const Fsa& g);

/// Trim recognizer of the supremal controllable sublanguage of
/// L_m(k) ∩ L_m(g) with respect to g. The empty automaton means no
/// nonempty controllable sublanguage exists.
Fsa supcon(const Fsa& g, const Fsa& k);

struct NonconflictVerdict {
  bool nonconflicting = true;
  std::size_t closed_loop_states = 0;
  // Shortest string reaching a joint state that cannot reach a marked one.
  EventString witness;
};

/// Every supervisor is lifted to g's alphabet; the meet of all of them with
/// g must be nonblocking.
NonconflictVerdict check_nonconflict(std::span<const Fsa> supervisors,
                                     const Fsa& g);
inline bool nonconflict(std::span<const Fsa> supervisors, const Fsa& g) {
  return check_nonconflict(supervisors, g).nonconflicting;
}

/// Per supervisor state, the controllable events it disables: eligible in
/// the plant at some jointly reachable state but undefined in s.
struct ControlPattern {
  std::string supervisor;
  // Indexed by StateId of the (lifted) supervisor; sorted event ids.
  std::vector<std::vector<std::string>> disabled;

  bool disables(StateId s, std::string_view event) const;
};

ControlPattern control_data(const Fsa& s, const Fsa& g);

// ------------------------------------------------------- modular pipeline

enum class Provenance { kVerbatim, kSupcon };
const char* to_string(Provenance p);

struct SpecInput {
  Fsa spec;
  std::size_t subplant = 0;
};

struct SpecReport {
  std::string name;
  std::size_t subplant = 0;
  std::size_t spec_states = 0;
  std::size_t k_states = 0;          // trim-free K = G_sub ∧ H
  std::size_t supervisor_states = 0;
  ControllabilityVerdict controllability;
  bool nonblocking = true;
  EventString blocking_witness;
  bool nonconflicting = true;        // singular check on K's closed loop
  bool supcon_matches_k = false;     // language-equivalence decision
  Provenance provenance = Provenance::kSupcon;
};

struct ModularSupervisorSet {
  std::vector<Fsa> supervisors;
  std::vector<Provenance> provenance;
  std::vector<ControlPattern> patterns;
  std::vector<std::size_t> subplant;
  std::vector<SpecReport> reports;
  NonconflictVerdict nonconflict;
};

/// Runs the modular pipeline. Throws SynthesisFailure naming the spec when
/// a supremal sublanguage is empty and ConflictError (with a witness in the
/// message) when the final set conflicts, unless `allow_conflict` is set, in
/// which case the verdict is only recorded.
ModularSupervisorSet modular_synthesis(std::span<const Fsa> subplants,
                                       std::span<const SpecInput> specs,
                                       bool allow_conflict = false);

nlohmann::json to_json(const ModularSupervisorSet& set);

/// Centralized reference: supcon of g against the meet of all lifted specs.
Fsa centralized_supervisor(const Fsa& g, std::span<const Fsa> specs);

}  // namespace fieldsup

#endif  // FIELDSUP_SYNTHESIS_HPP_
