// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "elaa/baselines.hpp"
#include "elaa/solver.hpp"

namespace {

using namespace elaa;

SystemModel desk_model(int ex, int ey, int ms, std::uint64_t seed = 1) {
  return build_system_model(desk_profile().with_layout(ex, ey, ms).with_users(2, 2).resolve_placements(seed));
}

void BM_SecondMoments(benchmark::State& state) {
  SystemConfig c = desk_profile().with_users(2, 2).resolve_placements(1);
  c.mc_samples = static_cast<int>(state.range(0));
  const ArrayGeometry g = ArrayGeometry::from_config(c);
  const ChannelSet ch = build_channels(g, c);
  const SteeringVector sv = steering_vector(g, c, *c.target);
  const PrecoderSet p = build_precoders(ch, sv, g, c);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_second_moments(ch, sv, p, g));
}
BENCHMARK(BM_SecondMoments)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Subproblem(benchmark::State& state) {
  const int ms = static_cast<int>(state.range(0));
  const SystemModel m = desk_model(8, 8, ms);
  const QoSTargets t = derive_qos_targets(m);
  const SurrogatePoint p{ActivationState::all_on(m.subarray_count()), {0.01, 0.01, 0.01}};
  for (auto _ : state) benchmark::DoNotOptimize(solve_subproblem(assemble_subproblem(m, t, p)));
  state.counters["S"] = m.subarray_count();
}
BENCHMARK(BM_Subproblem)->Arg(16)->Arg(8)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RunSca(benchmark::State& state) {
  const SystemModel m = desk_model(8, 8, static_cast<int>(state.range(0)));
  const QoSTargets t = derive_qos_targets(m);
  for (auto _ : state) benchmark::DoNotOptimize(run_sca(m, t));
}
BENCHMARK(BM_RunSca)->Arg(16)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const int ms = static_cast<int>(state.range(0));
  const SystemModel m = desk_model(8, 8, ms);
  const QoSTargets t = derive_qos_targets(m);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_oracle(m, t));
  state.counters["states"] = static_cast<double>(exhaustive_oracle(m, t).evaluations);
}
BENCHMARK(BM_Oracle)->Arg(16)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
