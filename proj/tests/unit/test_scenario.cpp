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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fieldsup/automaton_io.hpp"
#include "fieldsup/errors.hpp"
#include "fieldsup/plants.hpp"
#include "fieldsup/scenario.hpp"
#include "fieldsup/trace.hpp"

namespace fieldsup {
namespace {

const std::string kConfigs = FIELDSUP_CONFIG_DIR;

const SimulationResult& case_result(int k) {
  static std::map<int, SimulationResult> cache;
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, run_simulation(case_config(k))).first;
  return it->second;
}

std::string csv_of(const SimulationResult& r) {
  std::stringstream ss;
  write_trace_csv(ss, r.samples);
  return ss.str();
}

std::size_t count(const SimulationResult& r, const std::string& event) {
  std::size_t n = 0;
  for (const auto& e : r.events) n += e.event == event ? 1 : 0;
  return n;
}

std::size_t base_count(const SimulationResult& r, const std::string& base) {
  std::size_t n = 0;
  for (const auto& e : r.events) n += base_event(e.event) == base ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------- config

TEST(Config, RoundTripIsByteIdentical) {
  for (int k = 1; k <= 4; ++k) {
    const std::string text = write_config(case_config(k));
    EXPECT_EQ(write_config(parse_config(text)), text) << k;
  }
  ScenarioConfig c = case_config(3);
  set_config_value(c, "swarm.K_P", "0.7");
  set_config_value(c, "obstacle_jitter", "0.05");
  set_config_value(c, "seed", "99");
  const std::string text = write_config(c);
  const ScenarioConfig back = parse_config(text);
  EXPECT_EQ(back.swarm.K_P, 0.7);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(write_config(back), text);
}

TEST(Config, BundledFilesMatchCases) {
  for (int k = 1; k <= 4; ++k) {
    std::ifstream in(kConfigs + "/case" + std::to_string(k) + ".cfg");
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), write_config(case_config(k))) << k;
  }
}

TEST(Config, EveryKeyIsWritten) {
  const std::string text = write_config(case_config(1));
  for (const auto& key : config_keys()) {
    EXPECT_NE(text.find("\n" + key + " = "), std::string::npos) << key;
  }
}

std::size_t config_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Config, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(config_error_line("# c\nname = x\nbogus = 1\n"), 3u);
  EXPECT_EQ(config_error_line("name = x\nname = y\n"), 2u);
  EXPECT_EQ(config_error_line("\n\nno equals sign\n"), 3u);
}

TEST(Config, BadValuesAreConfigErrors) {
  EXPECT_THROW(parse_config("dt = -1\n"), ConfigError);
  EXPECT_EQ(config_error_line("name = x\npath = zigzag\n"), 2u);
  ScenarioConfig c;
  EXPECT_THROW(set_config_value(c, "nope", "1"), Error);
  EXPECT_THROW(case_config(5), ConfigError);
}

TEST(Config, PartialFileKeepsDefaults) {
  const ScenarioConfig c = parse_config("name = mini  # label\nduration = 3\n");
  EXPECT_EQ(c.name, "mini");
  EXPECT_EQ(c.duration, 3.0);
  EXPECT_EQ(c.dt, ScenarioConfig{}.dt);
}

// ----------------------------------------------------------------- setup

TEST(Setup, RobotsAndPlans) {
  const ScenarioSetup s = build_setup(case_config(1));
  ASSERT_EQ(s.world.size(), 3u);
  EXPECT_EQ(s.world.robots[0].kind, RobotKind::kUav);
  EXPECT_EQ(s.world.robots[1].kind, RobotKind::kUgv);
  EXPECT_EQ(s.world.obstacles.size(), 3u);
  ASSERT_EQ(s.plans.size(), 3u);
  // Both UGVs share the timing of the first lane.
  EXPECT_EQ(s.plans[1].path.duration, s.plans[2].path.duration);
  EXPECT_EQ(s.plans[0].inject_time, 1.0);
  EXPECT_EQ(s.plans[1].inject_time, 10.0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(s.world.vps[i].d, s.world.robots[i].position);
  }
  EXPECT_TRUE(build_setup(case_config(2)).world.obstacles.empty());
}

TEST(Setup, ObstaclesNearTheFirstLane) {
  const ScenarioConfig c = case_config(1);
  const ScenarioSetup s = build_setup(c);
  for (const auto& o : s.world.obstacles) {
    EXPECT_NEAR(std::hypot(o.x(), o.y()), c.circle_radius + c.obstacle_offset, 1e-9);
  }
}

// ------------------------------------------------------------------- runs

TEST(Cases, ObstacleFreeCasesNeverAvoid) {
  for (int k : {2, 4}) {
    const auto& r = case_result(k);
    EXPECT_FALSE(r.failure.has_value()) << *r.failure;
    EXPECT_EQ(base_count(r, "b4"), 0u);
    EXPECT_EQ(base_count(r, "a24"), 0u);
    EXPECT_FALSE(r.summary["dwell"]["ugv1"].contains("B3"));
    EXPECT_FALSE(r.summary["dwell"]["ugv2"].contains("B3"));
    EXPECT_FALSE(r.summary["dwell"]["uav0"].contains("A5"));
  }
}

TEST(Cases, ObstacleCasesAvoid) {
  EXPECT_EQ(count(case_result(1), "b4_1"), 3u);
  EXPECT_EQ(count(case_result(1), "b6_1"), 3u);
  EXPECT_GT(count(case_result(3), "b4_1"), 0u);
}

TEST(Cases, SafeAndComplete) {
  for (int k = 1; k <= 4; ++k) {
    const auto& r = case_result(k);
    EXPECT_FALSE(r.failure.has_value()) << k;
    EXPECT_EQ(r.invariant_violations, 0u) << k;
    EXPECT_TRUE(r.summary["mission_complete"].get<bool>()) << k;
    EXPECT_GT(r.summary["min_pairwise_distance"].get<double>(), SwarmParams{}.d_min) << k;
    EXPECT_EQ(r.samples.size(), 6000u);
  }
}

TEST(Cases, FormationBand) {
  for (int k : {2, 4}) {
    EXPECT_GE(case_result(k).summary["formation"]["percent"].get<double>(), 95.0) << k;
  }
}

TEST(Cases, EventLogsAreLegalRuns) {
  for (int k = 1; k <= 4; ++k) {
    const auto& r = case_result(k);
    EventString ids;
    for (const auto& e : r.events) ids.push_back(e.event);
    const auto v = verify_trace(build_runtime_model(PlantParams{}, 2), ids);
    EXPECT_TRUE(v.ok()) << k << ": " << v.reason;
  }
}

TEST(Cases, ContinuousInvariants) {
  for (int k = 1; k <= 4; ++k) {
    for (const auto& s : case_result(k).samples) {
      EXPECT_GE(s.robots[0].height(), 0.0);
      for (std::size_t i = 1; i < s.robots.size(); ++i) {
        ASSERT_EQ(s.robots[i].position.z(), 0.0);
      }
    }
  }
}

// Avoidance mode starts exactly one period after b4 and ends one period
// after b6 (samples are taken after the step).
TEST(Cases, SafetyModeFollowsDetectionEvents) {
  for (int k : {1, 3}) {
    const auto& r = case_result(k);
    const double dt = case_config(k).dt;
    for (std::size_t i = 1; i <= 2; ++i) {
      std::vector<double> enter, leave;
      std::string prev = "B1";
      for (const auto& s : r.samples) {
        if (s.modes[i] == "B3" && prev != "B3") enter.push_back(s.time - dt);
        if (s.modes[i] != "B3" && prev == "B3") leave.push_back(s.time - dt);
        prev = s.modes[i];
      }
      std::vector<double> b4, b6;
      for (const auto& e : r.events) {
        if (e.event == instance_event("b4", i)) b4.push_back(e.time);
        if (e.event == instance_event("b6", i)) b6.push_back(e.time);
      }
      ASSERT_EQ(enter.size(), b4.size());
      ASSERT_EQ(leave.size(), b6.size());
      for (std::size_t j = 0; j < b4.size(); ++j) EXPECT_NEAR(enter[j], b4[j], 1e-9);
      for (std::size_t j = 0; j < b6.size(); ++j) EXPECT_NEAR(leave[j], b6[j], 1e-9);
    }
  }
}

// --------------------------------------------------- summary recomputation

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

// Figures recomputed straight from the CSV text and the event log.
TEST(Summary, AgreesWithIndependentRecompute) {
  for (int k = 1; k <= 4; ++k) {
    const ScenarioConfig c = case_config(k);
    const auto& r = case_result(k);
    std::stringstream ev;
    write_events_jsonl(ev, r.events);
    double last_b10 = -1.0;
    std::map<std::string, int> counts;
    std::string line;
    std::getline(ev, line);   // header
    while (std::getline(ev, line)) {
      const auto j = nlohmann::json::parse(line);
      const std::string id = j["event"];
      ++counts[id];
      if (id.rfind("b10_", 0) == 0) last_b10 = std::max(last_b10, j["t"].get<double>());
    }
    std::stringstream csv(csv_of(r));
    std::getline(csv, line);
    std::getline(csv, line);
    struct Row { std::string robot; double x, y, z; std::string mode; };
    std::map<double, std::vector<Row>> by_time;
    while (std::getline(csv, line)) {
      const auto f = split(line);
      ASSERT_EQ(f.size(), 9u);
      if (f[1].rfind("vp:", 0) == 0) continue;
      by_time[std::strtod(f[0].c_str(), nullptr)].push_back(
          {f[1], std::strtod(f[2].c_str(), nullptr), std::strtod(f[3].c_str(), nullptr),
           std::strtod(f[4].c_str(), nullptr), f[8]});
    }
    double min_d = 1e300;
    int band = 0, in_band = 0;
    std::map<std::string, std::map<std::string, int>> dwell;
    for (const auto& [t, rows] : by_time) {
      for (const auto& a : rows) ++dwell[a.robot][a.mode];
      for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
          const double d = std::sqrt(std::pow(rows[a].x - rows[b].x, 2) +
                                     std::pow(rows[a].y - rows[b].y, 2) +
                                     std::pow(rows[a].z - rows[b].z, 2));
          min_d = std::min(min_d, d);
          if (rows[a].robot[0] == 'u' && rows[a].robot[1] == 'g' && rows[b].robot[1] == 'g' &&
              last_b10 >= 0.0 && t >= last_b10 + c.formation_settle) {
            ++band;
            in_band += std::abs(d - c.swarm.D_f) <= c.formation_band ? 1 : 0;
          }
        }
      }
    }
    const auto& s = r.summary;
    EXPECT_EQ(s["samples"].get<std::size_t>(), by_time.size());
    EXPECT_NEAR(s["min_pairwise_distance"].get<double>(), min_d, 1e-12) << k;
    EXPECT_EQ(s["formation"]["samples"].get<int>(), band) << k;
    EXPECT_EQ(s["formation"]["in_band"].get<int>(), in_band) << k;
    for (const auto& [robot, modes] : dwell) {
      for (const auto& [mode, n] : modes) {
        EXPECT_NEAR(s["dwell"][robot][mode].get<double>(), n * c.dt, 1e-9) << robot << mode;
      }
    }
    for (const auto& [id, n] : counts) EXPECT_EQ(s["event_counts"][id].get<int>(), n) << id;
    const bool complete = counts.count("a20") && counts.count("a29") &&
                          counts.count("b20_1") && counts.count("b20_2");
    EXPECT_EQ(s["mission_complete"].get<bool>(), complete);
  }
}

// -------------------------------------------------------------- determinism

TEST(Determinism, SameConfigSameBytes) {
  ScenarioConfig c = case_config(3);
  c.duration = 30.0;
  const auto a = run_simulation(c);
  const auto b = run_simulation(c);
  EXPECT_EQ(csv_of(a), csv_of(b));
  EXPECT_EQ(a.events, b.events);
}

TEST(Determinism, JitterFollowsSeed) {
  ScenarioConfig c = case_config(1);
  c.duration = 25.0;
  c.obstacle_jitter = 0.1;
  c.seed = 7;
  const auto a = run_simulation(c);
  const auto b = run_simulation(c);
  EXPECT_EQ(csv_of(a), csv_of(b));
  const auto oa = build_setup(c).world.obstacles;
  c.seed = 8;
  const auto ob = build_setup(c).world.obstacles;
  ASSERT_EQ(oa.size(), ob.size());
  EXPECT_NE(oa[0], ob[0]);
  const ScenarioConfig base = case_config(1);
  for (std::size_t j = 0; j < oa.size(); ++j) {
    EXPECT_LE((oa[j] - build_setup(base).world.obstacles[j]).norm(), 0.1 * std::sqrt(3.0));
  }
}

// ---------------------------------------------------------------- failures

TEST(Failure, RunStopsAndKeepsItsRecord) {
  ScenarioConfig c = case_config(1);
  c.plant.comm_radius = 4.0;   // links beyond the formation asymptote
  const auto r = run_simulation(c);
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_NE(r.failure->find("barrier"), std::string::npos);
  EXPECT_GT(r.failure_step, 0u);
  EXPECT_EQ(r.samples.size(), r.failure_step);
  EXPECT_FALSE(r.events.empty());
  EXPECT_TRUE(r.summary.contains("failure"));
  EXPECT_EQ(r.summary["samples"].get<std::size_t>(), r.samples.size());
}

// --------------------------------------------------------- supervisor sets

TEST(SupervisorSet, SaveLoadRoundTrip) {
  const PlantLibrary lib = build_plants();
  const auto subplants = template_subplants(lib);
  const auto set = modular_synthesis(subplants, template_spec_inputs(lib));
  const auto dir = std::filesystem::temp_directory_path() / "fieldsup_set_test";
  std::filesystem::remove_all(dir);
  save_supervisor_set(set, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  const auto back = load_supervisor_set(dir, subplants);
  ASSERT_EQ(back.supervisors.size(), set.supervisors.size());
  for (std::size_t j = 0; j < set.supervisors.size(); ++j) {
    EXPECT_EQ(write_fsa(back.supervisors[j]), write_fsa(set.supervisors[j]));
    EXPECT_EQ(back.provenance[j], set.provenance[j]);
    EXPECT_EQ(back.subplant[j], set.subplant[j]);
    EXPECT_EQ(back.patterns[j].disabled, set.patterns[j].disabled);
  }
  std::filesystem::remove_all(dir);
}

TEST(SupervisorSet, MissingManifestIsAnError) {
  const auto dir = std::filesystem::temp_directory_path() / "fieldsup_empty_set";
  std::filesystem::create_directories(dir);
  const PlantLibrary lib = build_plants();
  EXPECT_THROW(load_supervisor_set(dir, template_subplants(lib)), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace fieldsup
