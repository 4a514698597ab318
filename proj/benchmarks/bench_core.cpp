#include <benchmark/benchmark.h>

#include "tvgauss/bounds.hpp"
#include "tvgauss/ensemble.hpp"
#include "tvgauss/oracle.hpp"

using namespace tvgauss;

namespace {

GaussianPair make_pair(int dim, EnsembleKind kind) {
  const EnsembleSpec spec{dim, kind, 1e3, 1, 42};
  return generate(spec)[0];
}

void BM_RelativeSpectrum(benchmark::State& state) {
  const GaussianPair p =
      make_pair(static_cast<int>(state.range(0)), EnsembleKind::SameMeanPD);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relative_spectrum(p.first.cov(), p.second.cov()));
  }
}
BENCHMARK(BM_RelativeSpectrum)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_Assess(benchmark::State& state) {
  const GaussianPair p =
      make_pair(static_cast<int>(state.range(0)), EnsembleKind::DiffMean);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assess(p.first, p.second));
  }
}
BENCHMARK(BM_Assess)->Arg(2)->Arg(8)->Arg(32)->Arg(128);

void BM_McTv(benchmark::State& state) {
  const GaussianPair p = make_pair(4, EnsembleKind::DiffMean);
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_tv(p.first, p.second, samples, 7, 1));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(samples));
}
BENCHMARK(BM_McTv)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  const EnsembleSpec spec{8, EnsembleKind::SameRangeSingular, 1e3, 16, 11};
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate(spec));
  }
}
BENCHMARK(BM_Generate);

}  // namespace

BENCHMARK_MAIN();
