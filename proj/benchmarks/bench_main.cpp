#include "sttd/asttv.hpp"
#include "sttd/pipeline.hpp"
#include "sttd/solver.hpp"
#include "sttd/synth.hpp"
#include "sttd/tsvd.hpp"

#include <benchmark/benchmark.h>

using namespace sttd;

namespace {

Tensor3 noise_tensor(Dims d, std::uint64_t seed) {
  Rng rng(seed);
  Tensor3 t(d);
  for (std::size_t n = 0; n < t.size(); ++n) t[n] = rng.normal();
  return t;
}

FrameSequence scene(long size, long frames) {
  SceneSpec spec;
  spec.height = spec.width = size;
  spec.frames = frames;
  spec.seed = 7;
  spec.background.kind = BackgroundKind::Cloud;
  spec.background.level = 0.35;
  spec.noise_sigma = 15.0 / 255;
  TargetSpec t;
  t.row = double(size) / 2;
  t.col = double(size) / 3;
  t.vcol = 0.3;
  t.amplitude = 0.3;
  spec.targets.push_back(t);
  return generate(spec).sequence;
}

void BM_LaplaceSvt(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const Tensor3 q = noise_tensor({n, n, 3}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(laplace_svt(q, {1.0, 0.01, SvtRule::Exact}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LaplaceSvt)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void BM_BackgroundSolve(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const Dims d{n, n, 3};
  BackgroundSolver solver(make_spectra(d, SolverParams{}));
  const Tensor3 rhs = noise_tensor(d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(rhs));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_BackgroundSolve)->RangeMultiplier(2)->Range(32, 256)->Complexity(benchmark::oNLogN);

void BM_Decompose(benchmark::State& state) {
  const FrameSequence seq = scene(state.range(0), 3);
  const Tensor3 D = stack_frames(seq, 0, 3);
  int iterations = 0;
  for (auto _ : state) {
    const Decomposition r = decompose(D, SolverParams{});
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.T);
  }
  state.counters["admm_iterations"] = iterations;
}
BENCHMARK(BM_Decompose)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Detect(benchmark::State& state) {
  const FrameSequence seq = scene(64, 30);
  for (auto _ : state) benchmark::DoNotOptimize(detect(seq, SolverParams{}));
}
BENCHMARK(BM_Detect)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
