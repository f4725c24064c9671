#include <benchmark/benchmark.h>

#include <random>

#include "qai/verifier.hpp"

namespace {

void BM_RunRegistry(benchmark::State& state) {
  const auto& registry = qai::builtin_obligations();
  for (auto _ : state) benchmark::DoNotOptimize(qai::run_obligations(registry));
}
BENCHMARK(BM_RunRegistry);

void BM_SolveRandom(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::vector<qai::ConstraintFormula> formulas(256);
  for (auto& f : formulas) {
    for (int k = 0; k < 3; ++k) {
      f.conjuncts.push_back({qai::AffineTerm{rng(), rng()}, static_cast<qai::Cmp>(rng() % 5),
                             qai::AffineTerm::constant(rng())});
    }
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qai::solve(formulas[i++ % formulas.size()]));
}
BENCHMARK(BM_SolveRandom);

void BM_ParseFormula(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qai::parse_formula("2*n >= 64 && n < 64 && n + 1 >= 64"));
}
BENCHMARK(BM_ParseFormula);

}  // namespace
