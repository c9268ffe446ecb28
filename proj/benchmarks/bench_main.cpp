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

#include <benchmark/benchmark.h>

#include <utility>

#include "fieldsup/plants.hpp"
#include "fieldsup/runtime.hpp"
#include "fieldsup/scenario.hpp"
#include "fieldsup/synthesis.hpp"

namespace fieldsup {
namespace {

// UAV and UGV skeletons composed, 20 states.
void BM_SyncTemplates(benchmark::State& state) {
  const PlantLibrary lib = build_plants();
  for (auto _ : state) {
    Fsa g = sync(lib.uav.skeleton, lib.ugv.skeleton);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_SyncTemplates);

// Instantiated plant with n UGVs: 5 * 4^n states.
void BM_SyncInstantiated(benchmark::State& state) {
  const PlantLibrary lib = build_plants();
  std::vector<Fsa> parts = {lib.uav.skeleton};
  for (int i = 1; i <= state.range(0); ++i) {
    parts.push_back(instantiate_ugv(lib.ugv.skeleton, static_cast<std::size_t>(i)));
  }
  for (auto _ : state) {
    Fsa g = sync_all(parts);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_SyncInstantiated)->DenseRange(1, 4);

// supcon for the three specifications that need it.
void BM_Supcon(benchmark::State& state) {
  const PlantLibrary lib = build_plants();
  const auto subplants = template_subplants(lib);
  const auto specs = template_spec_inputs(lib);
  const auto& in = specs[static_cast<std::size_t>(state.range(0))];
  const Fsa& g = subplants[in.subplant];
  const Fsa k = meet(g, lift(in.spec, g.alphabet()));
  for (auto _ : state) {
    Fsa s = supcon(g, k);
    benchmark::DoNotOptimize(s);
  }
  state.SetLabel(in.spec.name());
}
BENCHMARK(BM_Supcon)->Arg(0)->Arg(1)->Arg(5);

void BM_ModularSynthesis(benchmark::State& state) {
  const PlantLibrary lib = build_plants();
  const auto subplants = template_subplants(lib);
  const auto specs = template_spec_inputs(lib);
  for (auto _ : state) {
    auto set = modular_synthesis(subplants, specs);
    benchmark::DoNotOptimize(set);
  }
}
BENCHMARK(BM_ModularSynthesis)->Unit(benchmark::kMillisecond);

// One closed-loop period of case 1, starting mid-mission.
void BM_SimulationStep(benchmark::State& state) {
  const ScenarioConfig c = case_config(1);
  ScenarioSetup setup = build_setup(c);
  LoopContext ctx;
  ctx.config.swarm = c.swarm;
  ctx.config.dt = c.dt;
  ctx.plans = setup.plans;
  LoopState s = initial_loop_state(build_runtime_model(c.plant, c.num_ugvs),
                                   std::move(setup.world));
  for (int k = 0; k < 1000; ++k) s = closed_loop_step(ctx, std::move(s)).first;
  for (auto _ : state) {
    auto r = closed_loop_step(ctx, s);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SimulationStep)->Unit(benchmark::kMicrosecond);

void BM_FullRun(benchmark::State& state) {
  const ScenarioConfig c = case_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = run_simulation(c);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_FullRun)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fieldsup

BENCHMARK_MAIN();
