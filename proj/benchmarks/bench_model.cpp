#include <benchmark/benchmark.h>

#include "popscope/annotations.hpp"
#include "popscope/classifier.hpp"
#include "popscope/evaluation.hpp"
#include "popscope/training.hpp"
#include "synthetic.hpp"

using namespace popscope;

namespace {

std::vector<LabeledExample> synthetic_dataset(std::size_t n, const FeatureConfig& cfg) {
  Rng rng(10);
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string text = bench::speech_text(rng, 1);
    LabeledExample ex{featurize(text, cfg), {}};
    ex.gold[0] = text.find("Elite") != std::string::npos;
    ex.gold[1] = text.find("Volk") != std::string::npos;
    ex.gold[2] = text.find("Konzerne") != std::string::npos;
    ex.gold[3] = text.find("Grenzen") != std::string::npos;
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

static void BM_TrainEpoch(benchmark::State& state) {
  TrainConfig cfg = TrainConfig::native();
  cfg.epochs = 1;
  const auto data = synthetic_dataset(static_cast<std::size_t>(state.range(0)), cfg.features);
  for (auto _ : state) benchmark::DoNotOptimize(train_baseline(data, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainEpoch)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_PredictTexts(benchmark::State& state) {
  TrainConfig cfg = TrainConfig::native();
  cfg.epochs = 1;
  const auto model = train_baseline(synthetic_dataset(200, cfg.features), cfg).model;
  Rng rng(11);
  std::vector<std::string> texts;
  for (int i = 0; i < 2000; ++i) texts.push_back(bench::speech_text(rng, 1));
  const auto jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(predict_texts(model, texts, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_PredictTexts)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_SearchThreshold(benchmark::State& state) {
  Rng rng(12);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> probs(n);
  std::vector<std::uint8_t> gold(n);
  for (std::size_t i = 0; i < n; ++i) {
    gold[i] = rng.uniform() < 0.2;
    probs[i] = 0.7 * rng.uniform() + (gold[i] ? 0.3 : 0.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(search_threshold(probs, gold, 0.001));
}
BENCHMARK(BM_SearchThreshold)->Arg(1000)->Arg(100000);

static void BM_FleissKappa(benchmark::State& state) {
  Rng rng(13);
  std::vector<ItemVotes> table(static_cast<std::size_t>(state.range(0)));
  for (auto& v : table) v = {static_cast<int>(rng.below(6)), 5};
  for (auto _ : state) benchmark::DoNotOptimize(fleiss_kappa(table, 5));
}
BENCHMARK(BM_FleissKappa)->Arg(8795);

// Cross-validated F1 of the baseline on synthetic keyword data, reported as
// counters; a record of the baseline's behavior, not a target.
static void BM_CrossValidation(benchmark::State& state) {
  const TrainConfig cfg = TrainConfig::native();
  const auto data = synthetic_dataset(500, cfg.features);
  CvReport report;
  for (auto _ : state) report = evaluate_cv(data, 5, cfg, 0.001, 1);
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    state.counters[std::string(column_name(kDimensions[d])) + "_f1"] =
        report.per_dimension[d][2].mean;
  }
  state.counters["macro_f1"] = report.macro[2].mean;
}
BENCHMARK(BM_CrossValidation)->Iterations(1)->Unit(benchmark::kMillisecond);
