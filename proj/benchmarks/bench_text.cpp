#include <benchmark/benchmark.h>

#include <sstream>

#include "popscope/corpus.hpp"
#include "popscope/dictionary.hpp"
#include "popscope/features.hpp"
#include "synthetic.hpp"

using namespace popscope;

static void BM_Segment(benchmark::State& state) {
  Rng rng(1);
  const std::string text = bench::speech_text(rng, static_cast<std::size_t>(state.range(0)));
  const SentenceSegmenter segmenter;
  for (auto _ : state) benchmark::DoNotOptimize(segmenter.split(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Segment)->Arg(10)->Arg(100);

static void BM_Featurize(benchmark::State& state) {
  Rng rng(2);
  const std::string text = bench::speech_text(rng, 1);
  FeatureConfig cfg;
  cfg.char_ngram_max = static_cast<unsigned>(state.range(0));
  if (cfg.char_ngram_max == 0) cfg.char_ngram_min = 0;
  for (auto _ : state) benchmark::DoNotOptimize(featurize(text, cfg));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Featurize)->Arg(0)->Arg(5);

static void BM_DictScore(benchmark::State& state) {
  std::istringstream in(
      "Altparteien\nElite\nEliten\nKartell\nabgehobene Elite\neinfachen Leute\n"
      "re:Volk(es|s)?\nre:(Rüstungs|Immobilien)?[Kk]onzerne\n");
  const auto spec = DictionarySpec::parse(in, "bench");
  Rng rng(3);
  std::vector<std::string> sentences;
  for (int i = 0; i < 256; ++i) sentences.push_back(bench::speech_text(rng, 1));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dict_score(sentences[i++ % sentences.size()], spec));
}
BENCHMARK(BM_DictScore);
