// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "turbomor/analysis/transient.hpp"
#include "turbomor/generators/networks.hpp"
#include "turbomor/linalg/cholesky.hpp"
#include "turbomor/linalg/sparse_sym.hpp"
#include "turbomor/partition/partitioned_reduce.hpp"
#include "turbomor/prima/prima.hpp"
#include "turbomor/reduce/turbomor.hpp"

namespace {

using namespace turbomor;

DescriptorSystem bus(Index lines, Index segments = 150) {
  BusOptions o;
  o.lines = lines;
  o.segments = segments;
  return stamp(generate_bus(o));
}

DescriptorSystem mesh(Index side) {
  MeshOptions o;
  o.rows = side;
  o.cols = side;
  o.ports = 16;
  o.seed = 7;
  return stamp(generate_mesh(o));
}

void BM_TurboMorBus(benchmark::State& state) {
  const DescriptorSystem sys = bus(state.range(0) / 2);
  for (auto _ : state) benchmark::DoNotOptimize(turbomor_reduce(sys, static_cast<int>(state.range(1))));
  state.counters["m"] = static_cast<double>(sys.order());
}
BENCHMARK(BM_TurboMorBus)->ArgsProduct({{16, 32, 64}, {1, 3}})->Unit(benchmark::kMillisecond);

void BM_PrimaBus(benchmark::State& state) {
  const DescriptorSystem sys = bus(state.range(0) / 2);
  for (auto _ : state) benchmark::DoNotOptimize(prima_reduce(sys, static_cast<int>(state.range(1))));
  state.counters["m"] = static_cast<double>(sys.order());
}
BENCHMARK(BM_PrimaBus)->ArgsProduct({{16, 32, 64}, {1, 3}})->Unit(benchmark::kMillisecond);

void BM_PartitionedMesh(benchmark::State& state) {
  const DescriptorSystem sys = mesh(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reduce_partitioned(sys, 2, 400));
  state.counters["m"] = static_cast<double>(sys.order());
}
BENCHMARK(BM_PartitionedMesh)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Cholesky(benchmark::State& state) {
  const DescriptorSystem sys = mesh(state.range(0));
  const SparseSymMatrix g = SparseSymMatrix::from_full(sys.g);
  for (auto _ : state) benchmark::DoNotOptimize(cholesky(g));
  state.counters["m"] = static_cast<double>(sys.order());
}
BENCHMARK(BM_Cholesky)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_TransientRom(benchmark::State& state) {
  const auto [rom, report] = turbomor_reduce(bus(16), static_cast<int>(state.range(0)));
  const std::vector<PwlSource> src(static_cast<std::size_t>(rom.p), PwlSource::step(1e-3, 0.0, 2e-11));
  TransientOptions opt;
  opt.backend = state.range(1) ? TransientBackend::block_tridiagonal : TransientBackend::dense;
  for (auto _ : state) benchmark::DoNotOptimize(transient_sim(rom, src, 1e-9, 1e-12, opt));
  state.SetLabel(state.range(1) ? "block" : "dense");
}
BENCHMARK(BM_TransientRom)->ArgsProduct({{2, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
