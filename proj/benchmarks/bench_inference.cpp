#include <benchmark/benchmark.h>

#include "fuzzdss/builtin.hpp"
#include "fuzzdss/dsl.hpp"
#include "fuzzdss/inference.hpp"
#include "fuzzdss/reporting.hpp"

using namespace fuzzdss;

static void BM_infer(benchmark::State& state) {
  const auto model = builtin_student_model();
  const CrispInputs inputs{{"pap", 4}, {"tardiness", 2}, {"absenteeism", 1}};
  for (auto _ : state) benchmark::DoNotOptimize(infer(model, inputs));
}
BENCHMARK(BM_infer);

static void BM_surface_grid(benchmark::State& state) {
  const auto model = builtin_student_model();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(surface_grid(model, "pap", "tardiness", {{"absenteeism", 3}}, n));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_surface_grid)->Arg(10)->Arg(50)->Arg(200);

static void BM_parse(benchmark::State& state) {
  const auto text = builtin_student_source();
  for (auto _ : state) benchmark::DoNotOptimize(parse_model({text}));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_parse);
BENCHMARK_MAIN();
