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

#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fieldsup/errors.hpp"
#include "fieldsup/trace.hpp"
#include "fieldsup/world.hpp"

namespace fieldsup {
namespace {

std::vector<Sample> random_samples(std::mt19937& rng, std::size_t count, std::size_t n) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  auto value = [&]() {
    // Spread over many magnitudes to exercise the shortest form.
    return u(rng) * std::pow(10.0, ex(rng) / 30);
  };
  const std::vector<std::string> modes = {"A1", "A3", "B2", "B4"};
  std::vector<Sample> out;
  for (std::size_t k = 0; k < count; ++k) {
    Sample s;
    s.time = 0.02 * static_cast<double>(k + 1);
    for (std::size_t i = 0; i < n; ++i) {
      RobotState r;
      r.position = Vec3(value(), value(), value());
      r.velocity = Vec3(value(), value(), value());
      s.robots.push_back(r);
      s.vps.emplace_back(value(), value(), value());
      s.vp_velocities.emplace_back(value(), value(), value());
      s.modes.push_back(modes[(k + i) % modes.size()]);
    }
    out.push_back(s);
  }
  return out;
}

void expect_rows_match(const std::vector<Sample>& samples, const std::vector<TraceRow>& rows) {
  std::vector<TraceRow> want;
  for (const auto& s : samples) {
    auto r = sample_rows(s);
    want.insert(want.end(), r.begin(), r.end());
  }
  ASSERT_EQ(rows.size(), want.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].time, want[k].time);
    EXPECT_EQ(rows[k].robot, want[k].robot);
    EXPECT_EQ(rows[k].position, want[k].position) << k;
    EXPECT_EQ(rows[k].velocity, want[k].velocity) << k;
    EXPECT_EQ(rows[k].mode, want[k].mode);
  }
}

TEST(Trace, SampleRowsCoverRobotsAndVps) {
  std::mt19937 rng(1);
  const auto s = random_samples(rng, 1, 3)[0];
  const auto rows = sample_rows(s);
  ASSERT_EQ(rows.size(), 6u);
  std::size_t vps = 0;
  for (const auto& r : rows) vps += r.is_vp() ? 1 : 0;
  EXPECT_EQ(vps, 3u);
  EXPECT_EQ(rows[0].robot, "uav0");
}

TEST(Trace, CsvRoundTripIsExact) {
  std::mt19937 rng(2);
  const auto samples = random_samples(rng, 40, 3);
  std::stringstream ss;
  write_trace_csv(ss, samples);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("# fieldsup-trace v1\ntime,robot,px,py,pz,vx,vy,vz,mode\n", 0), 0u);
  std::istringstream in(text);
  expect_rows_match(samples, read_trace_csv(in));
}

TEST(Trace, JsonlRoundTripIsExact) {
  std::mt19937 rng(3);
  const auto samples = random_samples(rng, 40, 2);
  std::stringstream ss;
  write_trace_jsonl(ss, samples);
  std::istringstream in(ss.str());
  expect_rows_match(samples, read_trace_jsonl(in));
}

TEST(Trace, RewriteIsByteIdentical) {
  std::mt19937 rng(4);
  const auto samples = random_samples(rng, 10, 3);
  std::stringstream a, b;
  write_trace_csv(a, samples);
  write_trace_csv(b, samples);
  EXPECT_EQ(a.str(), b.str());
}

std::size_t parse_error_line(const std::string& text, bool csv) {
  std::istringstream in(text);
  try {
    if (csv) read_trace_csv(in);
    else read_trace_jsonl(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Trace, CsvErrorsCarryLineNumbers) {
  const std::string head = "# fieldsup-trace v1\ntime,robot,px,py,pz,vx,vy,vz,mode\n";
  EXPECT_EQ(parse_error_line("time,robot\n", true), 1u);
  EXPECT_EQ(parse_error_line("# fieldsup-trace v1\nbogus\n", true), 2u);
  EXPECT_EQ(parse_error_line(head + "0.02,uav0,1,2,3,4,5,6,A1\n0.02,uav0,1,2\n", true), 4u);
  EXPECT_EQ(parse_error_line(head + "0.02,uav0,1,2,3,x,5,6,A1\n", true), 3u);
  EXPECT_EQ(parse_error_line("", true), 1u);
}

TEST(Trace, JsonlErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("{\"format\":\"other\"}\n", false), 1u);
  std::mt19937 rng(5);
  std::stringstream ss;
  write_trace_jsonl(ss, random_samples(rng, 1, 1));
  EXPECT_EQ(parse_error_line(ss.str() + "{not json\n", false), 4u);
}

TEST(Events, JsonlRoundTrip) {
  std::vector<EventObservation> ev = {
      {0.02, "b18_1", "ugv1", "mission_pending", 1.0},
      {10.04, "b4_2", "ugv2", "obstacle_distance", 1.4999999999999998},
      {12.0, "b7_2", "ugv2", "command", 0.0},
  };
  std::stringstream ss;
  write_events_jsonl(ss, ev, {{"scenario", "case1"}});
  const std::string text = ss.str();
  const auto header = nlohmann::json::parse(text.substr(0, text.find('\n')));
  EXPECT_EQ(header["format"], "fieldsup-events");
  EXPECT_EQ(header["version"], 1);
  EXPECT_EQ(header["scenario"], "case1");
  std::istringstream in(text);
  EXPECT_EQ(read_events_jsonl(in), ev);
}

TEST(Events, MissingHeaderIsRejected) {
  std::istringstream in("{\"t\":0,\"event\":\"a1\",\"source\":\"uav0\",\"cause\":\"command\"}\n");
  EXPECT_THROW(read_events_jsonl(in), ParseError);
  std::istringstream v2("{\"format\":\"fieldsup-events\",\"version\":2}\n");
  EXPECT_THROW(read_events_jsonl(v2), ParseError);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(-0.5), "-0.5");
  std::mt19937_64 rng(6);
  for (int k = 0; k < 10000; ++k) {
    const std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_number(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
}

// ----------------------------------------------------------------- world

Path square() {
  return Path{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 2, 0)}, 10.0};
}

TEST(Path, IndexFractionInterpolation) {
  const Path p = square();
  EXPECT_EQ(p.at(0.0), Vec3(0, 0, 0));
  EXPECT_EQ(p.at(0.25), Vec3(0.5, 0, 0));
  EXPECT_EQ(p.at(0.5), Vec3(1, 0, 0));
  EXPECT_EQ(p.at(0.75), Vec3(1, 1, 0));
  EXPECT_EQ(p.at(1.0), Vec3(1, 2, 0));
  EXPECT_EQ(p.at(2.0), Vec3(1, 2, 0));
  EXPECT_EQ(p.at(-1.0), Vec3(0, 0, 0));
}

TEST(Path, RemainingArc) {
  const Path p = square();
  EXPECT_DOUBLE_EQ(p.length(), 3.0);
  EXPECT_DOUBLE_EQ(p.remaining(0.25), 2.5);
  EXPECT_DOUBLE_EQ(p.remaining(0.75), 1.0);
  EXPECT_DOUBLE_EQ(p.remaining(1.0), 0.0);
}

TEST(Path, Validation) {
  EXPECT_THROW((Path{{Vec3::Zero()}, 1.0}.validate()), ConfigError);
  EXPECT_THROW((Path{{Vec3::Zero(), Vec3::Ones()}, 0.0}.validate()), ConfigError);
  EXPECT_NO_THROW(square().validate());
}

TEST(Mission, Progress) {
  const Path p = square();
  MissionState m;
  EXPECT_EQ(m.tau(5.0, p), 0.0);
  m.active = true;
  m.start_time = 2.0;
  EXPECT_DOUBLE_EQ(m.tau(4.5, p), 0.25);
  EXPECT_EQ(m.tau(100.0, p), 1.0);
  m.active = false;
  m.done = true;
  EXPECT_EQ(m.tau(3.0, p), 1.0);
}

TEST(Observe, ScalarsFromWorld) {
  WorldState w;
  RobotState uav;
  uav.kind = RobotKind::kUav;
  uav.position = Vec3(0, 0, -3);
  RobotState a, b;
  a.position = Vec3(0, 0, 0);
  b.position = Vec3(0, 2, 0);
  w.robots = {uav, a, b};
  for (const auto& r : w.robots) w.vps.push_back(make_vp(r));
  w.targets.assign(3, Vec3::Zero());
  w.obstacles = {Vec3(3, 0, 0)};
  MissionPlan plan{square(), 0.0};
  MissionState none;
  const Observation ou = observe(w, 0, none, plan, false);
  EXPECT_EQ(ou[Scalar::kHeight], 3.0);
  EXPECT_TRUE(std::isinf(ou[Scalar::kLinkDistance]));
  EXPECT_TRUE(std::isinf(ou[Scalar::kGoalDistance]));
  const Observation oa = observe(w, 1, none, plan, true);
  EXPECT_EQ(oa[Scalar::kHeight], 0.0);
  EXPECT_DOUBLE_EQ(oa[Scalar::kLinkDistance], 2.0);
  EXPECT_DOUBLE_EQ(oa[Scalar::kObstacleDistance], 3.0);
  EXPECT_EQ(oa[Scalar::kPeersFinished], 1.0);
  // Goal distance: arc still ahead plus the gap to the current target.
  MissionState m;
  m.assigned = m.active = true;
  m.start_time = 0.0;
  w.time = 2.5;   // tau 0.25, target (0.5, 0, 0)
  const Observation om = observe(w, 1, m, plan, false);
  EXPECT_DOUBLE_EQ(om[Scalar::kGoalDistance], 2.5 + 0.5);
  EXPECT_EQ(om[Scalar::kMissionActive], 1.0);
  EXPECT_DOUBLE_EQ(om[Scalar::kMissionClock], 2.5);
  EXPECT_DOUBLE_EQ(vp_distance(w, 1, 2), 2.0);
}

}  // namespace
}  // namespace fieldsup
