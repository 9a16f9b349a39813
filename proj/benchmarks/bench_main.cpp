#include <benchmark/benchmark.h>

#include "xdq/classify.hpp"
#include "xdq/dataio.hpp"
#include "xdq/modcurve.hpp"
#include "xdq/qform.hpp"

using namespace xdq;

namespace {

const CurveDataset& data() {
  static const CurveDataset d = dataio::load_dataset(std::string(XDQ_BENCH_DATA_DIR) + "/curves.csv");
  return d;
}

const CuratedFacts& facts() {
  static const CuratedFacts f = dataio::load_curated_facts(std::string(XDQ_BENCH_DATA_DIR) + "/curated_facts.txt");
  return f;
}

void BM_signature(benchmark::State& state) {
  const Int N = state.range(0);
  const auto d = units::plus_minus_one(N);
  for (auto _ : state) benchmark::DoNotOptimize(modcurve::signature(N, d));
  state.SetLabel("index " + std::to_string(modcurve::signature(N, d).mu));
}
BENCHMARK(BM_signature)->Arg(37)->Arg(101)->Arg(191);

void BM_subgroups(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(units::subgroups_containing_minus_one(state.range(0)));
}
BENCHMARK(BM_subgroups)->Arg(120)->Arg(168);

void BM_ap(benchmark::State& state) {
  const auto& e = *data().find("37a1");
  const Int p = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(ec::ap(e, p));
}
BENCHMARK(BM_ap)->Arg(101)->Arg(997)->Arg(10007);

void BM_represented_values(benchmark::State& state) {
  const Gram g{{6, -4, 1}, {-4, 6, -2}, {1, -2, 8}};
  for (auto _ : state) benchmark::DoNotOptimize(qf::represented_values(g, state.range(0)));
}
BENCHMARK(BM_represented_values)->Arg(50)->Arg(500);

void BM_main_table(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(classify::reproduce_main_table(data(), facts(), static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_main_table)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

// the packaged benchmark_main archive is LTO bytecode tied to one compiler build
BENCHMARK_MAIN();
