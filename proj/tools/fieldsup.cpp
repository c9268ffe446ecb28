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

// fieldsup command-line tool: synthesis, simulation, trace verification and
// graph export.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "fieldsup/automaton_io.hpp"
#include "fieldsup/errors.hpp"
#include "fieldsup/plants.hpp"
#include "fieldsup/runtime.hpp"
#include "fieldsup/scenario.hpp"
#include "fieldsup/synthesis.hpp"
#include "fieldsup/trace.hpp"

namespace fs = std::filesystem;
using namespace fieldsup;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

// Prefixes parse errors with the file they came from.
Fsa load(const std::string& file) {
  try {
    return read_fsa(file);
  } catch (const ParseError& e) {
    throw ParseError(0, file + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << text;
}

// ------------------------------------------------------------------ synth

struct SynthOptions {
  bool bundled = false;
  std::vector<std::string> plants;
  std::vector<std::string> specs;
  std::string out = "supervisors";
  bool allow_conflict = false;
};

int run_synth(const SynthOptions& o) {
  std::vector<Fsa> subplants;
  std::vector<SpecInput> specs;
  if (o.bundled) {
    if (!o.plants.empty() || !o.specs.empty()) {
      throw InputError("--bundled cannot be combined with --plant or --spec");
    }
    const PlantLibrary lib = build_plants();
    subplants = template_subplants(lib);
    specs = template_spec_inputs(lib);
  } else {
    if (o.plants.empty() || o.specs.empty()) {
      throw InputError("give --bundled, or at least one --plant and one --spec");
    }
    // "a.fsa+b.fsa" names the synchronous composition of the parts.
    for (const auto& p : o.plants) {
      std::vector<Fsa> parts;
      std::size_t start = 0;
      for (;;) {
        const auto plus = p.find('+', start);
        parts.push_back(load(p.substr(start, plus - start)));
        if (plus == std::string::npos) break;
        start = plus + 1;
      }
      subplants.push_back(parts.size() == 1 ? parts.front() : sync_all(parts));
    }
    for (const auto& s : o.specs) {
      std::string file = s;
      std::size_t index = 0;
      if (auto at = s.rfind('@'); at != std::string::npos) {
        file = s.substr(0, at);
        try {
          index = std::stoul(s.substr(at + 1));
        } catch (const std::exception&) {
          throw InputError("bad plant index in " + s);
        }
      }
      if (index >= subplants.size()) {
        throw InputError(fmt::format("{}: plant index {} out of range", s, index));
      }
      specs.push_back({load(file), index});
    }
  }

  ModularSupervisorSet set;
  try {
    set = modular_synthesis(subplants, specs, o.allow_conflict);
  } catch (const SynthesisFailure& e) {
    std::cerr << "synthesis failed: " << e.what() << '\n';
    return kFailed;
  } catch (const ConflictError& e) {
    std::cerr << "supervisors conflict: " << e.what() << '\n';
    return kFailed;
  }
  save_supervisor_set(set, o.out);
  for (const auto& r : set.reports) {
    std::cout << fmt::format("{:<6} {:<8} controllable={} nonblocking={} states={}\n",
                             r.name, to_string(r.provenance),
                             r.controllability.controllable ? "yes" : "no",
                             r.nonblocking ? "yes" : "no", r.supervisor_states);
  }
  std::cout << "nonconflicting: " << (set.nonconflict.nonconflicting ? "yes" : "no")
            << '\n';
  return set.nonconflict.nonconflicting ? kOk : kFailed;
}

// --------------------------------------------------------------- simulate

struct SimulateOptions {
  int case_index = 0;
  std::string config;
  std::vector<std::string> sets;
  std::string out = "run";
  std::string format = "json";
  std::vector<std::uint64_t> seeds;
  unsigned jobs = 0;
  // Typed overrides, applied after the config file.
  double duration = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

void flatten(const nlohmann::json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  out += prefix + "," + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
}

std::string summary_text(const nlohmann::json& summary, const std::string& format) {
  if (format == "json") return summary.dump(2) + "\n";
  std::string out = "key,value\n";
  flatten(summary, "", out);
  return out;
}

// Runs one configuration into `dir`; returns the exit code.
int simulate_one(const ScenarioConfig& c, const fs::path& dir, const std::string& format,
                 std::ostream& log) {
  fs::create_directories(dir);
  write_text(dir / "config.cfg", write_config(c));
  const SimulationResult r = run_simulation(c);
  {
    std::ofstream out(dir / "trace.csv", std::ios::binary);
    write_trace_csv(out, r.samples);
  }
  {
    std::ofstream out(dir / "events.jsonl", std::ios::binary);
    write_events_jsonl(out, r.events,
                       {{"scenario", c.name}, {"num_ugvs", c.num_ugvs}, {"seed", c.seed}});
  }
  write_text(dir / (format == "json" ? "summary.json" : "summary.csv"),
             summary_text(r.summary, format));
  if (r.failure) {
    log << fmt::format("{}: stopped at step {}: {}\n", c.name, r.failure_step,
                       *r.failure);
    return kFailed;
  }
  log << fmt::format("{}: {} samples, {} events -> {}\n", c.name, r.samples.size(),
                     r.events.size(), dir.string());
  return kOk;
}

int run_simulate(const SimulateOptions& o) {
  if ((o.case_index != 0) == !o.config.empty()) {
    throw InputError("give exactly one of --case and --config");
  }
  ScenarioConfig c = o.case_index != 0 ? case_config(o.case_index) : read_config(o.config);
  for (const auto& kv : o.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value: " + kv);
    set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.duration > 0.0) c.duration = o.duration;
  if (o.dt > 0.0) c.dt = o.dt;
  if (o.has_seed) c.seed = o.seed;
  c.validate();

  if (o.seeds.empty()) return simulate_one(c, o.out, o.format, std::cout);

  // One independent runtime per seed; results land in per-seed directories.
  std::vector<int> codes(o.seeds.size(), kOk);
  std::vector<std::string> logs(o.seeds.size());
  const unsigned jobs = o.jobs > 0 ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::mutex m;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t k;
      {
        std::lock_guard<std::mutex> lock(m);
        if (next >= o.seeds.size()) return;
        k = next++;
      }
      ScenarioConfig ck = c;
      ck.seed = o.seeds[k];
      std::ostringstream log;
      try {
        codes[k] = simulate_one(ck, fs::path(o.out) / fmt::format("seed{}", ck.seed),
                                o.format, log);
      } catch (const std::exception& e) {
        log << "seed " << ck.seed << ": " << e.what() << '\n';
        codes[k] = kBadInput;
      }
      logs[k] = log.str();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, o.seeds.size()); ++t) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) t.join();
  int code = kOk;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    std::cout << logs[k];
    code = std::max(code, codes[k]);
  }
  return code;
}

// ----------------------------------------------------------------- verify

struct VerifyOptions {
  std::string events;
  std::string trace;
  std::string supervisors;
  int num_ugvs = -1;
};

int run_verify(const VerifyOptions& o) {
  std::ifstream in(o.events);
  if (!in) throw InputError("cannot open " + o.events);
  std::vector<EventObservation> log;
  std::size_t num_ugvs = 2;
  {
    std::string header;
    std::getline(in, header);
    try {
      auto h = nlohmann::json::parse(header);
      if (h.contains("num_ugvs")) num_ugvs = h["num_ugvs"].get<std::size_t>();
    } catch (const nlohmann::json::exception&) {
      // read_events_jsonl reports the malformed header below.
    }
    in.clear();
    in.seekg(0);
    try {
      log = read_events_jsonl(in);
    } catch (const ParseError& e) {
      throw ParseError(0, o.events + ": " + e.what());
    }
  }
  if (o.num_ugvs >= 0) num_ugvs = static_cast<std::size_t>(o.num_ugvs);
  if (!o.trace.empty()) {
    std::ifstream t(o.trace);
    if (!t) throw InputError("cannot open " + o.trace);
    try {
      read_trace_csv(t);
    } catch (const ParseError& e) {
      throw ParseError(0, o.trace + ": " + e.what());
    }
  }

  PlantLibrary lib = build_plants();
  const auto subplants = template_subplants(lib);
  ModularSupervisorSet set =
      o.supervisors.empty()
          ? modular_synthesis(subplants, template_spec_inputs(lib))
          : load_supervisor_set(o.supervisors, subplants);
  auto model = std::make_shared<const RuntimeModel>(
      lib, instantiate(lib, set, num_ugvs, false));

  std::vector<std::string> events;
  events.reserve(log.size());
  for (const auto& e : log) events.push_back(e.event);
  const TraceVerdict v = verify_trace(model, events);

  nlohmann::json out = {{"legal", v.ok()}, {"events", events.size()}};
  if (!v.legal) {
    out["index"] = v.index;
    out["reason"] = v.reason;
    out["witness"] = v.witness;
  }
  nlohmann::json pv = nlohmann::json::array();
  for (const auto& p : v.policy_violations) {
    pv.push_back({{"policy", p.policy}, {"subject", p.subject},
                  {"witness", p.witness}, {"detail", p.detail}});
  }
  out["policy_violations"] = pv;
  std::cout << out.dump(2) << '\n';
  return v.ok() ? kOk : kFailed;
}

// ------------------------------------------------------------- export-dot

int run_export_dot(const std::string& file, const std::string& out) {
  const std::string dot = to_dot(load(file));
  if (out.empty() || out == "-") {
    std::cout << dot;
  } else {
    write_text(out, dot);
  }
  return kOk;
}

// ----------------------------------------------------------------- models

int run_models(const std::string& dir) {
  fs::create_directories(dir);
  const PlantLibrary lib = build_plants();
  save_fsa(lib.uav.skeleton, fs::path(dir) / "G_A.fsa");
  save_fsa(lib.ugv.skeleton, fs::path(dir) / "G_B.fsa");
  for (const auto& s : lib.specs) save_fsa(s.spec, fs::path(dir) / (s.spec.name() + ".fsa"));
  write_text(fs::path(dir) / "plants.json", sidecar_json(lib).dump(2) + "\n");
  std::cout << "wrote " << 3 + lib.specs.size() << " files to " << dir << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fieldsup: modular supervisory control for UAV/UGV teams"};
  app.require_subcommand(1);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Modular supervisor synthesis");
  synth->add_flag("--bundled", so.bundled, "Use the built-in UAV/UGV models");
  synth->add_option("--plant", so.plants,
                    "Subplant file, or a+b+... to compose (repeatable)");
  synth->add_option("--spec", so.specs, "Specification FILE[@PLANT_INDEX] (repeatable)");
  synth->add_option("-o,--out", so.out, "Output directory")->capture_default_str();
  synth->add_flag("--allow-conflict", so.allow_conflict,
                  "Report a conflicting set instead of failing");

  SimulateOptions mo;
  auto* sim = app.add_subcommand("simulate", "Run a scenario");
  sim->add_option("--case", mo.case_index, "Bundled case 1-4")->check(CLI::Range(1, 4));
  sim->add_option("-c,--config", mo.config, "Scenario config file");
  sim->add_option("--set", mo.sets, "Override a config key, key=value (repeatable)");
  sim->add_option("--duration", mo.duration, "Run length (s)");
  sim->add_option("--dt", mo.dt, "Step (s)");
  auto* seed_opt = sim->add_option("--seed", mo.seed, "Random seed");
  sim->add_option("--seeds", mo.seeds, "Run several seeds concurrently")->delimiter(',');
  sim->add_option("-j,--jobs", mo.jobs, "Worker threads for --seeds");
  sim->add_option("-o,--out", mo.out, "Output directory")->capture_default_str();
  sim->add_option("--format", mo.format, "Summary format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  VerifyOptions vo;
  auto* ver = app.add_subcommand("verify", "Check a recorded event log");
  ver->add_option("events", vo.events, "events.jsonl")->required();
  ver->add_option("--trace", vo.trace, "trace.csv to validate alongside");
  ver->add_option("--supervisors", vo.supervisors,
                  "Directory written by synth (default: synthesize the bundled set)");
  ver->add_option("--num-ugvs", vo.num_ugvs, "Override the UGV count from the log header");

  std::string dot_in;
  std::string dot_out;
  auto* dot = app.add_subcommand("export-dot", "Render an automaton as Graphviz");
  dot->add_option("file", dot_in, "Automaton file")->required();
  dot->add_option("-o,--out", dot_out, "Output file (default stdout)");

  std::string models_dir = "models";
  auto* models = app.add_subcommand("models", "Write the built-in models as files");
  models->add_option("-o,--out", models_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }
  mo.has_seed = seed_opt->count() > 0;

  try {
    if (*synth) return run_synth(so);
    if (*sim) return run_simulate(mo);
    if (*ver) return run_verify(vo);
    if (*dot) return run_export_dot(dot_in, dot_out);
    if (*models) return run_models(models_dir);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kBadInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kBadInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}
