#include <benchmark/benchmark.h>

#include "famc/suites.hpp"

namespace {

void run(benchmark::State& state, const char* suite, famc::Execution exec) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto rep = famc::run_property_suite(suite, 1, count, exec);
    benchmark::DoNotOptimize(rep);
    if (!rep.ok()) state.SkipWithError("suite reported failures");
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_thm_4_3_4_4_serial(benchmark::State& s) { run(s, "thm_4_3_4_4", famc::Execution::Serial); }
void BM_thm_4_3_4_4_parallel(benchmark::State& s) { run(s, "thm_4_3_4_4", famc::Execution::Parallel); }
void BM_matrix_oracle_serial(benchmark::State& s) { run(s, "matrix_oracle", famc::Execution::Serial); }
void BM_matrix_oracle_parallel(benchmark::State& s) { run(s, "matrix_oracle", famc::Execution::Parallel); }
void BM_cor_3_3_serial(benchmark::State& s) { run(s, "cor_3_3", famc::Execution::Serial); }
void BM_cor_3_3_parallel(benchmark::State& s) { run(s, "cor_3_3", famc::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_thm_4_3_4_4_serial)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_thm_4_3_4_4_parallel)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matrix_oracle_serial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matrix_oracle_parallel)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cor_3_3_serial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cor_3_3_parallel)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
