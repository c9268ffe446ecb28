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

#ifndef FIELDSUP_POLICIES_HPP_
#define FIELDSUP_POLICIES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldsup/automaton.hpp"

namespace fieldsup {

/// A policy as a deterministic monitor. Events outside the monitor alphabet
/// are ignored; an event of the alphabet with no transition from the current
/// monitor state is a violation. `must_enable[q]` lists events the closed
/// loop has to keep enabled while the monitor is in state q.
struct PolicyMonitor {
  std::string policy;        // "POL1" .. "POL10"
  std::string subject;       // "uav0", "ugv1", ... or "team"
  std::string description;
  Fsa monitor;
  std::vector<std::vector<std::string>> must_enable;
};

struct PolicyViolation {
  std::string policy;
  std::string subject;
  EventString witness;       // offending string, last event included
  std::string detail;
};

/// Monitors for one UAV and `num_ugvs` UGVs. With `suffixed` false a single
/// UGV with plain event ids is assumed (the template-level closed loop).
std::vector<PolicyMonitor> build_policies(std::size_t num_ugvs,
                                          bool suffixed = true);

/// Exact check over every string of L(closed_loop), by product search.
/// Returns a shortest violation.
std::optional<PolicyViolation> check_policy(const PolicyMonitor& m,
                                            const Fsa& closed_loop);

/// Same assertion, evaluated string by string on all strings of length
/// <= max_len. Returns the first violation in enumeration order.
std::optional<PolicyViolation> check_policy_bounded(const PolicyMonitor& m,
                                                    const Fsa& closed_loop,
                                                    std::size_t max_len);

/// String-level check of the transition part of a monitor.
std::optional<PolicyViolation> check_string(const PolicyMonitor& m,
                                            std::span<const std::string> s);

}  // namespace fieldsup

#endif  // FIELDSUP_POLICIES_HPP_
