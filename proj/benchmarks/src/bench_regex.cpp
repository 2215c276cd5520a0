#include <string>

#include <benchmark/benchmark.h>

#include "algsim/pattern.hpp"

namespace {

void BM_BacktrackingPathological(benchmark::State& state) {
  const algsim::Pattern pattern = algsim::Pattern::compile("(a|a)*b");
  const std::string input(static_cast<std::size_t>(state.range(0)), 'a');
  std::int64_t steps = 0;
  for (auto _ : state) {
    algsim::MatchResult r = pattern.search_backtracking(input);
    benchmark::DoNotOptimize(r.matched);
    steps = r.steps;
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_BacktrackingPathological)->DenseRange(8, 20, 4);

void BM_BudgetedPathological(benchmark::State& state) {
  const algsim::Pattern pattern = algsim::Pattern::compile("(a|a)*b");
  const std::string input(static_cast<std::size_t>(state.range(0)), 'a');
  std::int64_t steps = 0;
  for (auto _ : state) {
    auto r = pattern.search_budgeted(input, 1'000'000);
    benchmark::DoNotOptimize(r->matched);
    steps = r->steps;
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_BudgetedPathological)->DenseRange(8, 512, 126);

void BM_BacktrackingBenign(benchmark::State& state) {
  const algsim::Pattern pattern = algsim::Pattern::compile("/admin.*");
  const std::string input = "/static/images/logo-" +
                            std::string(static_cast<std::size_t>(state.range(0)), 'x') +
                            ".png";
  for (auto _ : state) {
    algsim::MatchResult r = pattern.search_backtracking(input);
    benchmark::DoNotOptimize(r.matched);
  }
}
BENCHMARK(BM_BacktrackingBenign)->Range(8, 1024);

}  // namespace
