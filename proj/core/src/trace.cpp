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

#include "fieldsup/trace.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/core.h>

#include "fieldsup/errors.hpp"

namespace fieldsup {

namespace {

constexpr const char* kCsvMagic = "# fieldsup-trace v1";
constexpr const char* kCsvColumns = "time,robot,px,py,pz,vx,vy,vz,mode";

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError(line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 vec_from(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

nlohmann::json row_json(const TraceRow& r) {
  return {{"t", r.time}, {"robot", r.robot}, {"p", vec_json(r.position)},
          {"v", vec_json(r.velocity)}, {"mode", r.mode}};
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

std::vector<TraceRow> sample_rows(const Sample& s) {
  std::vector<TraceRow> out;
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    out.push_back({s.time, robot_name(i), s.robots[i].position, s.robots[i].velocity,
                   s.modes[i]});
  }
  for (std::size_t i = 0; i < s.vps.size(); ++i) {
    out.push_back({s.time, "vp:" + std::to_string(i), s.vps[i], s.vp_velocities[i],
                   s.modes[i]});
  }
  return out;
}

void write_trace_csv(std::ostream& os, std::span<const Sample> samples) {
  os << kCsvMagic << '\n' << kCsvColumns << '\n';
  for (const auto& s : samples) {
    for (const auto& r : sample_rows(s)) {
      os << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.time, r.robot,
                        r.position.x(), r.position.y(), r.position.z(),
                        r.velocity.x(), r.velocity.y(), r.velocity.z(), r.mode);
    }
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& is) {
  std::vector<TraceRow> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (n == 1) {
      if (line != kCsvMagic) throw ParseError(n, "missing trace version line");
      continue;
    }
    if (n == 2) {
      if (line != kCsvColumns) throw ParseError(n, "unexpected column header");
      continue;
    }
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 9) throw ParseError(n, "expected 9 fields");
    TraceRow r;
    r.time = parse_double(f[0], n);
    r.robot = std::string(f[1]);
    r.position = {parse_double(f[2], n), parse_double(f[3], n), parse_double(f[4], n)};
    r.velocity = {parse_double(f[5], n), parse_double(f[6], n), parse_double(f[7], n)};
    r.mode = std::string(f[8]);
    out.push_back(std::move(r));
  }
  if (n < 2) throw ParseError(n + 1, "truncated trace header");
  return out;
}

void write_trace_jsonl(std::ostream& os, std::span<const Sample> samples) {
  os << nlohmann::json{{"format", "fieldsup-trace"}, {"version", kTraceVersion}}.dump()
     << '\n';
  for (const auto& s : samples) {
    for (const auto& r : sample_rows(s)) os << row_json(r).dump() << '\n';
  }
}

std::vector<TraceRow> read_trace_jsonl(std::istream& is) {
  std::vector<TraceRow> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (n == 1) {
        if (j.value("format", "") != "fieldsup-trace") {
          throw ParseError(n, "not a fieldsup trace");
        }
        continue;
      }
      out.push_back({j.at("t").get<double>(), j.at("robot").get<std::string>(),
                     vec_from(j.at("p")), vec_from(j.at("v")),
                     j.at("mode").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(n, e.what());
    }
  }
  return out;
}

nlohmann::json to_json(const EventObservation& e) {
  nlohmann::json cause = nlohmann::json::object();
  cause[e.cause] = std::isfinite(e.value) ? nlohmann::json(e.value) : nlohmann::json();
  return {{"t", e.time}, {"event", e.event}, {"source", e.source}, {"cause", cause}};
}

EventObservation event_from_json(const nlohmann::json& j) {
  EventObservation e;
  e.time = j.at("t").get<double>();
  e.event = j.at("event").get<std::string>();
  e.source = j.at("source").get<std::string>();
  const auto& c = j.at("cause");
  if (!c.is_object() || c.size() != 1) throw InputError("cause must have one entry");
  e.cause = c.begin().key();
  e.value = c.begin()->is_null() ? std::nan("") : c.begin()->get<double>();
  return e;
}

void write_events_jsonl(std::ostream& os, std::span<const EventObservation> events,
                        const nlohmann::json& header) {
  nlohmann::json h = header;
  h["format"] = "fieldsup-events";
  h["version"] = kTraceVersion;
  os << h.dump() << '\n';
  for (const auto& e : events) os << to_json(e).dump() << '\n';
}

std::vector<EventObservation> read_events_jsonl(std::istream& is) {
  std::vector<EventObservation> out;
  std::string line;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (!header) {
        if (!j.is_object() || j.value("format", "") != "fieldsup-events") {
          throw ParseError(n, "missing event log header");
        }
        if (j.value("version", 0) != kTraceVersion) {
          throw ParseError(n, "unsupported event log version");
        }
        header = true;
        continue;
      }
      out.push_back(event_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(n, e.what());
    } catch (const InputError& e) {
      throw ParseError(n, e.what());
    }
  }
  if (!header) throw ParseError(n + 1, "empty event log");
  return out;
}

}  // namespace fieldsup
