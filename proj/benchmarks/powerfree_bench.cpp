#include <benchmark/benchmark.h>

#include "powerfree/enumerate.hpp"
#include "powerfree/morphism.hpp"
#include "powerfree/testsets.hpp"
#include "powerfree/transfer.hpp"
#include "powerfree/word.hpp"

namespace {

using namespace powerfree;

void BM_enumerate(benchmark::State& state) {
  FreenessSpec cube(3);
  Alphabet binary(2);
  EnumerationOptions opts;
  opts.workers = 1;
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CountTable table = count_powerfree(cube, binary, n, opts);
    benchmark::DoNotOptimize(table.max_n());
  }
}
BENCHMARK(BM_enumerate)->Arg(18)->Arg(24);

void BM_transfer_build(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  for (auto _ : state) {
    TransferSystem ts = build_transfer_system(FreenessSpec(3, p), Alphabet(2));
    benchmark::DoNotOptimize(ts.state_count());
  }
}
BENCHMARK(BM_transfer_build)->Arg(4)->Arg(6);

void BM_transfer_series(benchmark::State& state) {
  TransferSystem ts = build_transfer_system(FreenessSpec(3, 5), Alphabet(2));
  for (auto _ : state) {
    CountTable table = series_coefficients(ts, 64);
    benchmark::DoNotOptimize(table.max_n());
  }
}
BENCHMARK(BM_transfer_series);

void BM_minimal_testset(benchmark::State& state) {
  Alphabet binary(2);
  Morphism m(binary, binary,
             {Word::parse(binary, "011011010110110011011010110"),
              Word::parse(binary, "011011010110110011010110110")});
  for (auto _ : state) {
    bool ok = cubefree_binary_test(m);
    benchmark::DoNotOptimize(ok);
  }
}
BENCHMARK(BM_minimal_testset);

void BM_uniform_testset(benchmark::State& state) {
  Alphabet binary(2);
  Morphism m(Alphabet(3), binary,
             {Word::parse(binary, "001011"), Word::parse(binary, "001101"),
              Word::parse(binary, "011001")});
  for (auto _ : state) {
    bool ok = kpowerfree_uniform_test(m, 3);
    benchmark::DoNotOptimize(ok);
  }
}
BENCHMARK(BM_uniform_testset);

}  // namespace

BENCHMARK_MAIN();
