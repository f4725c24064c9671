#include <benchmark/benchmark.h>

#include <filesystem>

#include "qai/vendor_graph.hpp"

namespace {

const std::filesystem::path kCorpus = std::filesystem::path(QAI_FIXTURE_DIR) / "corpus";

void BM_FingerprintTree(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qai::fingerprint_tree(kCorpus / "xacc-mini"));
}
BENCHMARK(BM_FingerprintTree)->Unit(benchmark::kMicrosecond);

void BM_DetectVendoring(benchmark::State& state) {
  const auto a = qai::fingerprint_tree(kCorpus / "aer-mini");
  const auto b = qai::fingerprint_tree(kCorpus / "xacc-mini");
  for (auto _ : state) benchmark::DoNotOptimize(qai::detect_vendoring(a, b));
}
BENCHMARK(BM_DetectVendoring)->Unit(benchmark::kMicrosecond);

void BM_NormalizeAndHash(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 4000; ++i) text += "  value_" + std::to_string(i) + " = compute(x);   \r\n\r\n";
  for (auto _ : state) benchmark::DoNotOptimize(qai::sha256_hex(qai::normalize_source(text)));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_NormalizeAndHash);

}  // namespace
