#include <benchmark/benchmark.h>

#include "rauzy/aiet.hpp"
#include "rauzy/analysis.hpp"
#include "rauzy/combinat.hpp"
#include "rauzy/random.hpp"
#include "rauzy/renorm.hpp"
#include "rauzy/spectral.hpp"

using namespace rauzy;

namespace {

IET random_rotation_iet(std::size_t d, std::size_t bits, std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  return build_iet(random_simplex_point(rng, d, bits), canonical_rotation_perm(d));
}

void BM_RauzyClass(benchmark::State& state) {
  const Perm p = canonical_rotation_perm(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rauzy_class(p).perms.size());
}
BENCHMARK(BM_RauzyClass)->DenseRange(3, 7);

// exact Zorich orbit with matrices, the cost behind the cocycle checks
void BM_ZorichOrbit(benchmark::State& state) {
  const IET t = random_rotation_iet(4, 4096, 1);
  const auto blocks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(orbit(t, blocks).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ZorichOrbit)->Arg(30)->Arg(300);

void BM_OrbitLevelsOnly(benchmark::State& state) {
  const IET t = random_rotation_iet(3, 4096, 2);
  OrbitOptions oo;
  oo.record_matrices = false;
  for (auto _ : state) benchmark::DoNotOptimize(orbit(t, 2000, oo).size());
}
BENCHMARK(BM_OrbitLevelsOnly)->Unit(benchmark::kMillisecond);

void BM_GenericConditionScan(benchmark::State& state) {
  const IET t = random_rotation_iet(3, 4096, 3);
  const Schedule c = builtin_schedule("log2");
  for (auto _ : state) benchmark::DoNotOptimize(generic_condition_scan(t, Rational(1, 64), c, 2000).hits.size());
}
BENCHMARK(BM_GenericConditionScan)->Unit(benchmark::kMillisecond);

void BM_AffineOrbit(benchmark::State& state) {
  const IET t = random_rotation_iet(3, 1024, 4);
  const auto bits = static_cast<BigReal::Precision>(state.range(0));
  const AIET f = aiet_over_iet(t, 60, rotation_stable_spaces(t).central_stable.basis.front(), bits);
  for (auto _ : state) benchmark::DoNotOptimize(aiet_orbit(f, 60).blocks());
}
BENCHMARK(BM_AffineOrbit)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_FirstReturnMap(benchmark::State& state) {
  const IET t = random_rotation_iet(5, 256, 5);
  const OrbitRecord rec = orbit(t, 6);
  const Interval j{Rational(0), rec.interval_length(6)};
  for (auto _ : state) benchmark::DoNotOptimize(first_return_map(t, j).size());
}
BENCHMARK(BM_FirstReturnMap);

}  // namespace

BENCHMARK_MAIN();
