#include <benchmark/benchmark.h>

#include <filesystem>

#include "qai/scan.hpp"

namespace {

const std::filesystem::path kCorpus = std::filesystem::path(QAI_FIXTURE_DIR) / "corpus";

void BM_ScanCorpus(benchmark::State& state) {
  const qai::RuleSet rules = qai::load_builtin_rules();
  qai::ScanOptions options;
  options.workers = static_cast<std::size_t>(state.range(0));
  std::vector<std::filesystem::path> roots;
  for (const auto& e : std::filesystem::directory_iterator(kCorpus)) roots.push_back(e.path());
  for (auto _ : state) {
    for (const auto& root : roots) benchmark::DoNotOptimize(qai::scan_tree(root, rules, options));
  }
}
BENCHMARK(BM_ScanCorpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

// One synthetic 2000-line file, most lines inert, every 50th a sink.
void BM_AnalyzeLargeFile(benchmark::State& state) {
  const qai::RuleSet rules = qai::load_builtin_rules();
  std::string text = "def run(n):\n";
  for (int i = 0; i < 2000; ++i) {
    text += i % 50 == 0 ? "    state = np.zeros(2**n)\n" : "    total += weights[i] * values[i]  # inert\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(qai::analyze_file("big.py", text, rules, {}));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_AnalyzeLargeFile)->Unit(benchmark::kMillisecond);

}  // namespace
