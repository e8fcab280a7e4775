// Copyright 2026 The Flotilla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference against OpenMP kernels for the collision space and the
// per-cycle certificate.

#include <benchmark/benchmark.h>

#include <vector>

#include "flotilla/certificate.hpp"
#include "flotilla/collision.hpp"

namespace flotilla {
namespace {

void BM_CollisionSpaceSerial(benchmark::State& state) {
  const TailShape s;
  const double res = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ComputeCollisionSpaceSerial(FrontBackOffset(s), s, res));
  }
}
BENCHMARK(BM_CollisionSpaceSerial)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CollisionSpaceParallel(benchmark::State& state) {
  const TailShape s;
  const double res = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeCollisionSpace(FrontBackOffset(s), s, res));
  }
}
BENCHMARK(BM_CollisionSpaceParallel)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

std::vector<GridCell> Block(int side) {
  std::vector<GridCell> cells;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) cells.push_back({c, r});
  }
  return cells;
}

std::vector<WaveformCommand> Commands(const LatticeConfiguration& cfg) {
  std::vector<WaveformCommand> cmds;
  for (const auto& g : cfg.geometry()) {
    cmds.push_back({Centerline::kForward, 1.0 + 0.3 * (g.rear_rank - 1),
                    kDefaultOmega});
  }
  return cmds;
}

void BM_CertificateSerial(benchmark::State& state) {
  const auto cfg = LatticeConfiguration::Build(Block(static_cast<int>(state.range(0))));
  const auto cmds = Commands(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(CertifyNoUndockSerial(cfg, cmds));
}
BENCHMARK(BM_CertificateSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CertificateParallel(benchmark::State& state) {
  const auto cfg = LatticeConfiguration::Build(Block(static_cast<int>(state.range(0))));
  const auto cmds = Commands(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(CertifyNoUndock(cfg, cmds));
}
BENCHMARK(BM_CertificateParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace flotilla

BENCHMARK_MAIN();
