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

#ifndef FIELDSUP_AUTOMATON_IO_HPP_
#define FIELDSUP_AUTOMATON_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "fieldsup/automaton.hpp"

namespace fieldsup {

// Line-based automaton text format:
//
//   # comment
//   name: G_B
//   alphabet: b1:c:"Start mission" b4:u ...
//   states: B1:"Stationary" B2 ...
//   initial: B1
//   marked: B1 B4
//   trans: B1 b1 B2
//
// `alphabet:`, `states:` and `marked:` may be repeated; entries accumulate.
// Labels are optional and may be double-quoted to contain spaces.

/// Throws ParseError (with 1-based line number) on malformed input,
/// duplicate declarations and dangling references.
Fsa parse_fsa(std::string_view text, std::string default_name = {});
Fsa read_fsa(const std::filesystem::path& path);

/// Canonical text: alphabet in id order, states and transitions in index
/// order. parse_fsa(write_fsa(a)) reproduces `a` exactly.
std::string write_fsa(const Fsa& a);
void save_fsa(const Fsa& a, const std::filesystem::path& path);

/// Graphviz rendering. Marked states are double circles, the initial state
/// gets an arrow from an invisible node, uncontrollable edges are dashed.
std::string to_dot(const Fsa& a);

}  // namespace fieldsup

#endif  // FIELDSUP_AUTOMATON_IO_HPP_
