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

#ifndef FIELDSUP_TRACE_HPP_
#define FIELDSUP_TRACE_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fieldsup/runtime.hpp"

namespace fieldsup {

inline constexpr int kTraceVersion = 1;

/// One row of the continuous trace. VP rows use robot "vp:<i>".
struct TraceRow {
  double time = 0.0;
  std::string robot;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  std::string mode;

  bool is_vp() const { return robot.rfind("vp:", 0) == 0; }
};

std::vector<TraceRow> sample_rows(const Sample& s);

/// CSV: a "# fieldsup-trace v1" line, the column header, one row per robot
/// and VP per sample. Numbers use the shortest round-trip form.
void write_trace_csv(std::ostream& os, std::span<const Sample> samples);
/// Same rows as JSON lines after a header object.
void write_trace_jsonl(std::ostream& os, std::span<const Sample> samples);
/// Throws ParseError with the 1-based line number.
std::vector<TraceRow> read_trace_csv(std::istream& is);
std::vector<TraceRow> read_trace_jsonl(std::istream& is);

/// Event log: a header object then one object per event.
void write_events_jsonl(std::ostream& os, std::span<const EventObservation> events,
                        const nlohmann::json& header = nlohmann::json::object());
std::vector<EventObservation> read_events_jsonl(std::istream& is);

nlohmann::json to_json(const EventObservation& e);
EventObservation event_from_json(const nlohmann::json& j);

/// Shortest representation that parses back to the same double.
std::string format_number(double v);

}  // namespace fieldsup

#endif  // FIELDSUP_TRACE_HPP_
