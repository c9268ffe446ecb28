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

#include "fieldsup/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/core.h>

#include "fieldsup/automaton_io.hpp"
#include "fieldsup/errors.hpp"
#include "fieldsup/synthesis.hpp"

namespace fieldsup {

// ------------------------------------------------------------------ config

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: bad value '{}'", key, v));
  }
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, std::string_view)> set;
};

template <typename T>
Field number(std::string key, T ScenarioConfig::*m) {
  return {key, [m](const ScenarioConfig& c) { return fmt::format("{}", c.*m); },
          [m, key](ScenarioConfig& c, std::string_view v) {
            c.*m = parse_number<T>(key, v);
          }};
}

template <typename S>
Field nested(std::string key, S ScenarioConfig::*outer, double S::*inner) {
  return {key,
          [outer, inner](const ScenarioConfig& c) {
            return fmt::format("{}", c.*outer.*inner);
          },
          [outer, inner, key](ScenarioConfig& c, std::string_view v) {
            c.*outer.*inner = parse_number<double>(key, v);
          }};
}

const std::vector<Field>& fields() {
  using C = ScenarioConfig;
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back({"name", [](const C& c) { return c.name; },
                 [](C& c, std::string_view s) { c.name = std::string(s); }});
    v.push_back({"path",
                 [](const C& c) {
                   return std::string(c.path == PathKind::kCircular ? "circular"
                                                                    : "straight");
                 },
                 [](C& c, std::string_view s) {
                   if (s == "circular") c.path = PathKind::kCircular;
                   else if (s == "straight") c.path = PathKind::kStraight;
                   else throw ConfigError("path must be circular or straight");
                 }});
    v.push_back({"obstacles",
                 [](const C& c) { return std::string(c.obstacles ? "present" : "absent"); },
                 [](C& c, std::string_view s) {
                   if (s == "present") c.obstacles = true;
                   else if (s == "absent") c.obstacles = false;
                   else throw ConfigError("obstacles must be present or absent");
                 }});
    v.push_back(number("duration", &C::duration));
    v.push_back(number("dt", &C::dt));
    v.push_back(number("seed", &C::seed));
    v.push_back(number("num_ugvs", &C::num_ugvs));
    v.push_back(number("circle_radius", &C::circle_radius));
    v.push_back(number("straight_length", &C::straight_length));
    v.push_back(number("lane_spacing", &C::lane_spacing));
    v.push_back(number("uav_lane_offset", &C::uav_lane_offset));
    v.push_back(number("ugv_start_offset", &C::ugv_start_offset));
    v.push_back(number("ramp_fraction", &C::ramp_fraction));
    v.push_back(number("waypoints", &C::waypoints));
    v.push_back(number("obstacle_count", &C::obstacle_count));
    v.push_back(number("obstacle_offset", &C::obstacle_offset));
    v.push_back(number("obstacle_jitter", &C::obstacle_jitter));
    v.push_back(number("uav_mission_time", &C::uav_mission_time));
    v.push_back(number("ugv_mission_time", &C::ugv_mission_time));
    v.push_back(number("uav_speed", &C::uav_speed));
    v.push_back(number("ugv_speed", &C::ugv_speed));
    v.push_back(number("formation_settle", &C::formation_settle));
    v.push_back(number("formation_band", &C::formation_band));
    v.push_back(nested("plant.obstacle_threshold", &C::plant, &PlantParams::obstacle_threshold));
    v.push_back(nested("plant.hysteresis", &C::plant, &PlantParams::hysteresis));
    v.push_back(nested("plant.comm_radius", &C::plant, &PlantParams::comm_radius));
    v.push_back(nested("plant.goal_tolerance", &C::plant, &PlantParams::goal_tolerance));
    v.push_back(nested("plant.ground_tolerance", &C::plant, &PlantParams::ground_tolerance));
    v.push_back(nested("plant.cruise_altitude", &C::plant, &PlantParams::cruise_altitude));
    v.push_back(nested("plant.hover_fraction", &C::plant, &PlantParams::hover_fraction));
    v.push_back(nested("plant.stop_speed", &C::plant, &PlantParams::stop_speed));
    v.push_back(nested("plant.mission_timeout", &C::plant, &PlantParams::mission_timeout));
    v.push_back(nested("plant.invariant_slack", &C::plant, &PlantParams::invariant_slack));
    v.push_back(nested("swarm.D_f", &C::swarm, &SwarmParams::D_f));
    v.push_back(nested("swarm.d_min", &C::swarm, &SwarmParams::d_min));
    v.push_back(nested("swarm.d_max", &C::swarm, &SwarmParams::d_max));
    v.push_back(nested("swarm.k_f", &C::swarm, &SwarmParams::k_f));
    v.push_back(nested("swarm.k_o", &C::swarm, &SwarmParams::k_o));
    v.push_back(nested("swarm.K_P", &C::swarm, &SwarmParams::K_P));
    v.push_back(nested("swarm.K_I", &C::swarm, &SwarmParams::K_I));
    v.push_back(nested("swarm.K_D", &C::swarm, &SwarmParams::K_D));
    v.push_back(nested("swarm.error_max", &C::swarm, &SwarmParams::error_max));
    v.push_back(nested("swarm.vp_max_speed", &C::swarm, &SwarmParams::vp_max_speed));
    v.push_back(nested("uav.mass", &C::uav, &UavParams::mass));
    v.push_back(nested("uav.gravity", &C::uav, &UavParams::gravity));
    v.push_back(nested("uav.kp", &C::uav, &UavParams::kp));
    v.push_back(nested("uav.kd", &C::uav, &UavParams::kd));
    v.push_back(nested("uav.thrust_max", &C::uav, &UavParams::thrust_max));
    v.push_back(nested("ugv.mass", &C::ugv, &UgvParams::mass));
    v.push_back(nested("ugv.inertia", &C::ugv, &UgvParams::inertia));
    v.push_back(nested("ugv.k_nu", &C::ugv, &UgvParams::k_nu));
    v.push_back(nested("ugv.k_omega", &C::ugv, &UgvParams::k_omega));
    v.push_back(nested("ugv.nu_max", &C::ugv, &UgvParams::nu_max));
    v.push_back(nested("ugv.omega_max", &C::ugv, &UgvParams::omega_max));
    return v;
  }();
  return f;
}

// Unit or allowed values, written as a trailing comment.
const std::map<std::string, std::string, std::less<>>& docs() {
  static const std::map<std::string, std::string, std::less<>> d = {
      {"name", "run label"},
      {"path", "circular | straight"},
      {"obstacles", "present | absent"},
      {"duration", "s"},
      {"dt", "s"},
      {"seed", "obstacle jitter RNG"},
      {"num_ugvs", "count"},
      {"circle_radius", "m, first UGV lane"},
      {"straight_length", "m"},
      {"lane_spacing", "m"},
      {"uav_lane_offset", "m, outward of the first lane"},
      {"ugv_start_offset", "m, extra inward start offset of later UGVs"},
      {"ramp_fraction", "of the path"},
      {"waypoints", "segments per path"},
      {"obstacle_count", "count"},
      {"obstacle_offset", "m, outward of the first lane"},
      {"obstacle_jitter", "m"},
      {"uav_mission_time", "s"},
      {"ugv_mission_time", "s"},
      {"uav_speed", "m/s"},
      {"ugv_speed", "m/s"},
      {"formation_settle", "s"},
      {"formation_band", "m, either side of D_f"},
      {"plant.obstacle_threshold", "m, D_o"},
      {"plant.hysteresis", "ratio"},
      {"plant.comm_radius", "m"},
      {"plant.goal_tolerance", "m"},
      {"plant.ground_tolerance", "m"},
      {"plant.cruise_altitude", "m"},
      {"plant.hover_fraction", "of cruise altitude"},
      {"plant.stop_speed", "m/s"},
      {"plant.mission_timeout", "s"},
      {"plant.invariant_slack", "m"},
      {"swarm.D_f", "m"},
      {"swarm.d_min", "m"},
      {"swarm.d_max", "m"},
      {"swarm.k_f", "gain"},
      {"swarm.k_o", "gain"},
      {"swarm.K_P", "1/s"},
      {"swarm.K_I", "1/s^2"},
      {"swarm.K_D", "-"},
      {"swarm.error_max", "m"},
      {"swarm.vp_max_speed", "m/s"},
      {"uav.mass", "kg"},
      {"uav.gravity", "m/s^2"},
      {"uav.kp", "1/s^2"},
      {"uav.kd", "1/s"},
      {"uav.thrust_max", "N"},
      {"ugv.mass", "kg"},
      {"ugv.inertia", "kg m^2"},
      {"ugv.k_nu", "1/s"},
      {"ugv.k_omega", "1/s"},
      {"ugv.nu_max", "m/s"},
      {"ugv.omega_max", "rad/s"},
  };
  return d;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (name.empty() || name.find_first_of("#\n") != std::string::npos) {
    throw ConfigError("name must be nonempty without '#' or newlines");
  }
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  if (!(dt > 0.0) || dt > duration) throw ConfigError("dt must be in (0, duration]");
  if (num_ugvs < 1) throw ConfigError("at least one UGV is required");
  if (!(circle_radius > 0.0) || !(straight_length > 0.0)) {
    throw ConfigError("path size must be positive");
  }
  if (!(lane_spacing > 0.0)) throw ConfigError("lane_spacing must be positive");
  if (path == PathKind::kCircular &&
      circle_radius - static_cast<double>(num_ugvs - 1) * lane_spacing -
              ugv_start_offset <= 0.0) {
    throw ConfigError("inner lanes do not fit inside circle_radius");
  }
  if (ugv_start_offset < 0.0) throw ConfigError("ugv_start_offset must be >= 0");
  if (!(ramp_fraction > 0.0) || ramp_fraction > 1.0) {
    throw ConfigError("ramp_fraction must be in (0, 1]");
  }
  if (waypoints < 2) throw ConfigError("waypoints must be at least 2");
  if (obstacle_jitter < 0.0) throw ConfigError("obstacle_jitter must be >= 0");
  if (!(uav_speed > 0.0) || !(ugv_speed > 0.0)) {
    throw ConfigError("mission speeds must be positive");
  }
  if (uav_mission_time < 0.0 || ugv_mission_time < 0.0) {
    throw ConfigError("mission times must be >= 0");
  }
  if (formation_settle < 0.0 || !(formation_band > 0.0)) {
    throw ConfigError("formation reporting window is invalid");
  }
  plant.validate();
  swarm.validate();
  uav.validate();
  ugv.validate();
}

ScenarioConfig case_config(int index) {
  ScenarioConfig c;
  switch (index) {
    case 1: c.path = PathKind::kCircular; c.obstacles = true; break;
    case 2: c.path = PathKind::kCircular; c.obstacles = false; break;
    case 3: c.path = PathKind::kStraight; c.obstacles = true; break;
    case 4: c.path = PathKind::kStraight; c.obstacles = false; break;
    default: throw ConfigError(fmt::format("no case {} (expected 1-4)", index));
  }
  c.name = fmt::format("case{}", index);
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

std::string write_config(const ScenarioConfig& c) {
  std::string out = "# fieldsup scenario\n";
  for (const auto& f : fields()) {
    out += f.key + " = " + f.get(c);
    if (auto it = docs().find(f.key); it != docs().end()) out += "  # " + it->second;
    out += "\n";
  }
  return out;
}

void set_config_value(ScenarioConfig& c, std::string_view key, std::string_view value) {
  const Field* f = find_field(key);
  if (f == nullptr) throw ConfigError("unknown key " + std::string(key));
  f->set(c, value);
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (find_field(key) == nullptr) {
      throw ParseError(line_no, "unknown key " + std::string(key));
    }
    if (auto it = seen.find(key); it != seen.end()) {
      throw ParseError(line_no, fmt::format("duplicate key {} (first on line {})", key,
                                            it->second));
    }
    seen.emplace(std::string(key), line_no);
    try {
      set_config_value(c, key, value);
    } catch (const ConfigError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  c.validate();
  return c;
}

ScenarioConfig read_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------- geometry

namespace {

// Point at progress tau on a lane shifted `inward` from the first UGV lane.
Vec3 lane_point(const ScenarioConfig& c, double inward, double tau, double z) {
  if (c.path == PathKind::kCircular) {
    const double th = 2.0 * std::numbers::pi * tau;
    const double r = c.circle_radius - inward;
    return {r * std::cos(th), r * std::sin(th), z};
  }
  return {c.straight_length * tau, 0.5 * c.lane_spacing - inward, z};
}

Path lane_path(const ScenarioConfig& c, double inward, double merge, double z) {
  Path p;
  for (std::size_t k = 0; k <= c.waypoints; ++k) {
    const double tau = static_cast<double>(k) / static_cast<double>(c.waypoints);
    const double extra = merge * std::max(0.0, 1.0 - tau / c.ramp_fraction);
    p.waypoints.push_back(lane_point(c, inward + extra, tau, z));
  }
  return p;
}

}  // namespace

ScenarioSetup build_setup(const ScenarioConfig& c) {
  c.validate();
  ScenarioSetup s;
  const std::size_t n = c.num_ugvs + 1;

  MissionPlan uav;
  uav.path = lane_path(c, -c.uav_lane_offset, 0.0, -c.plant.cruise_altitude);
  uav.path.duration = uav.path.length() / c.uav_speed;
  uav.inject_time = c.uav_mission_time;
  s.plans.push_back(uav);

  double ugv_duration = 0.0;
  for (std::size_t i = 1; i <= c.num_ugvs; ++i) {
    MissionPlan m;
    const double inward = static_cast<double>(i - 1) * c.lane_spacing;
    m.path = lane_path(c, inward, i > 1 ? c.ugv_start_offset : 0.0, 0.0);
    // Every UGV shares the first lane's timing so lanes stay abreast.
    if (i == 1) ugv_duration = m.path.length() / c.ugv_speed;
    m.path.duration = ugv_duration;
    m.inject_time = c.ugv_mission_time;
    s.plans.push_back(std::move(m));
  }

  WorldState& w = s.world;
  for (std::size_t i = 0; i < n; ++i) {
    RobotState r;
    const Path& p = s.plans[i].path;
    r.kind = i == 0 ? RobotKind::kUav : RobotKind::kUgv;
    r.position = p.waypoints.front();
    r.position.z() = 0.0;
    r.mass = i == 0 ? c.uav.mass : c.ugv.mass;
    if (i > 0) {
      const Vec3 d = p.waypoints[1] - p.waypoints[0];
      r.heading = std::atan2(d.y(), d.x());
    }
    w.robots.push_back(r);
    w.vps.push_back(make_vp(r));
    w.targets.push_back(r.position);
  }
  w.links.assign(n * n, 0);

  if (c.obstacles) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    for (std::size_t k = 0; k < c.obstacle_count; ++k) {
      const double tau = c.path == PathKind::kCircular
                             ? (static_cast<double>(k) + 0.5) /
                                   static_cast<double>(c.obstacle_count)
                             : (static_cast<double>(k) + 1.0) /
                                   static_cast<double>(c.obstacle_count + 1);
      Vec3 o = lane_point(c, -c.obstacle_offset, tau, 0.0);
      if (c.obstacle_jitter > 0.0) {
        o.x() += c.obstacle_jitter * jitter(rng);
        o.y() += c.obstacle_jitter * jitter(rng);
      }
      w.obstacles.push_back(o);
    }
  }
  w.check();
  return s;
}

std::shared_ptr<const RuntimeModel> build_runtime_model(const PlantParams& plant,
                                                        std::size_t num_ugvs) {
  PlantLibrary lib = build_plants(plant);
  const auto subplants = template_subplants(lib);
  const auto specs = template_spec_inputs(lib);
  const ModularSupervisorSet set = modular_synthesis(subplants, specs);
  InstantiatedSystem sys = instantiate(lib, set, num_ugvs, false);
  return std::make_shared<const RuntimeModel>(std::move(lib), std::move(sys));
}

// -------------------------------------------------------------- simulation

SimulationResult run_simulation(const ScenarioConfig& c) {
  ScenarioSetup setup = build_setup(c);
  LoopContext ctx;
  ctx.config.swarm = c.swarm;
  // The swarm terms use the same thresholds as the event detectors.
  ctx.config.swarm.D_o = c.plant.obstacle_threshold;
  ctx.config.swarm.comm_radius = c.plant.comm_radius;
  ctx.config.uav = c.uav;
  ctx.config.ugv = c.ugv;
  ctx.config.dt = c.dt;
  ctx.plans = std::move(setup.plans);

  LoopState s = initial_loop_state(build_runtime_model(c.plant, c.num_ugvs),
                                   std::move(setup.world));
  SimulationResult out;
  const auto steps = static_cast<std::uint64_t>(std::llround(c.duration / c.dt));
  out.samples.reserve(steps);
  for (std::uint64_t k = 0; k < steps; ++k) {
    try {
      auto [next, rec] = closed_loop_step(ctx, s);
      s = std::move(next);
      out.events.insert(out.events.end(), rec.events.begin(), rec.events.end());
      out.invariant_violations += rec.invariant_violations;
      out.samples.push_back(std::move(rec.sample));
    } catch (const ModelViolation& e) {
      out.failure = e.what();
    } catch (const SimulationFault& e) {
      out.failure = e.what();
    } catch (const ExecutorBug& e) {
      out.failure = e.what();
    }
    if (out.failure) {
      out.failure_step = k;
      break;
    }
  }
  std::vector<TraceRow> rows;
  for (const auto& smp : out.samples) {
    auto r = sample_rows(smp);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  out.summary = summarize(c, rows, out.events, out.invariant_violations);
  if (out.failure) {
    out.summary["failure"] = {{"step", out.failure_step},
                              {"time", static_cast<double>(out.failure_step) * c.dt},
                              {"what", *out.failure}};
  }
  return out;
}

nlohmann::json summarize(const ScenarioConfig& c, const std::vector<TraceRow>& rows,
                         const std::vector<EventObservation>& events,
                         std::size_t invariant_violations) {
  using nlohmann::json;
  std::map<std::string, std::map<std::string, std::size_t>> dwell_count;
  std::map<std::string, std::size_t> counts;
  for (const auto& e : events) ++counts[e.event];

  double last_connect = -1.0;
  for (const auto& e : events) {
    if (base_event(e.event) == "b10") last_connect = std::max(last_connect, e.time);
  }
  const double window = last_connect + c.formation_settle;

  double min_dist = std::numeric_limits<double>::infinity();
  std::size_t band_total = 0;
  std::size_t band_in = 0;
  std::size_t samples = 0;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    std::vector<const TraceRow*> robots;
    while (j < rows.size() && rows[j].time == rows[i].time) {
      if (!rows[j].is_vp()) robots.push_back(&rows[j]);
      ++j;
    }
    ++samples;
    for (const auto* r : robots) ++dwell_count[r->robot][r->mode];
    for (std::size_t a = 0; a < robots.size(); ++a) {
      for (std::size_t b = a + 1; b < robots.size(); ++b) {
        const double d = (robots[a]->position - robots[b]->position).norm();
        min_dist = std::min(min_dist, d);
        const bool ugv_pair = robots[a]->robot.rfind("ugv", 0) == 0 &&
                              robots[b]->robot.rfind("ugv", 0) == 0;
        if (ugv_pair && last_connect >= 0.0 && rows[i].time >= window) {
          ++band_total;
          if (std::abs(d - c.swarm.D_f) <= c.formation_band + 1e-12) ++band_in;
        }
      }
    }
    i = j;
  }

  json dwell = json::object();
  for (const auto& [robot, modes] : dwell_count) {
    for (const auto& [mode, n] : modes) {
      dwell[robot][mode] = static_cast<double>(n) * c.dt;
    }
  }
  bool complete = counts.count("a20") > 0 && counts.count("a29") > 0;
  for (std::size_t i = 1; i <= c.num_ugvs; ++i) {
    if (counts.count(instance_event("b20", i)) == 0) complete = false;
  }

  json formation = {{"connected_at", last_connect >= 0.0 ? json(last_connect) : json()},
                    {"window_start", last_connect >= 0.0 ? json(window) : json()},
                    {"samples", band_total},
                    {"in_band", band_in},
                    {"percent", band_total > 0 ? 100.0 * static_cast<double>(band_in) /
                                                     static_cast<double>(band_total)
                                               : 0.0}};
  return {{"scenario", c.name},
          {"duration", c.duration},
          {"samples", samples},
          {"dwell", dwell},
          {"event_counts", counts},
          {"min_pairwise_distance",
           std::isfinite(min_dist) ? json(min_dist) : json()},
          {"formation", formation},
          {"mission_complete", complete},
          {"invariant_violations", invariant_violations}};
}

// ---------------------------------------------------------- supervisor sets

void save_supervisor_set(const ModularSupervisorSet& set,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t j = 0; j < set.supervisors.size(); ++j) {
    const Fsa& s = set.supervisors[j];
    const std::string file = s.name() + ".fsa";
    save_fsa(s, dir / file);
    entries.push_back({{"name", s.name()},
                       {"file", file},
                       {"spec", set.reports[j].name},
                       {"subplant", set.subplant[j]},
                       {"provenance", to_string(set.provenance[j])}});
  }
  nlohmann::json manifest = {{"format", "fieldsup-supervisors"},
                             {"version", 1},
                             {"supervisors", entries},
                             {"nonconflicting", set.nonconflict.nonconflicting}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
  std::ofstream(dir / "report.json") << to_json(set).dump(2) << '\n';
}

ModularSupervisorSet load_supervisor_set(const std::filesystem::path& dir,
                                         std::span<const Fsa> subplants) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw InputError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json m;
  try {
    in >> m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("manifest.json: ") + e.what());
  }
  ModularSupervisorSet set;
  for (const auto& e : m.at("supervisors")) {
    Fsa s = read_fsa(dir / e.at("file").get<std::string>());
    const auto sub = e.at("subplant").get<std::size_t>();
    if (sub >= subplants.size()) {
      throw InputError("supervisor " + s.name() + " names an unknown subplant");
    }
    const auto prov = e.at("provenance").get<std::string>();
    set.provenance.push_back(prov == "verbatim" ? Provenance::kVerbatim
                                                : Provenance::kSupcon);
    set.patterns.push_back(control_data(s, subplants[sub]));
    set.subplant.push_back(sub);
    SpecReport r;
    r.name = e.value("spec", s.name());
    r.subplant = sub;
    r.supervisor_states = s.num_states();
    r.provenance = set.provenance.back();
    set.reports.push_back(std::move(r));
    set.supervisors.push_back(std::move(s));
  }
  set.nonconflict.nonconflicting = m.value("nonconflicting", true);
  return set;
}

}  // namespace fieldsup
