#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "metric_fixtures.hpp"
#include "oracles.hpp"
#include "popscope/error.hpp"
#include "popscope/evaluation.hpp"
#include "popscope/rng.hpp"

using namespace popscope;

namespace {

void expect_partition(const std::vector<std::vector<std::size_t>>& parts, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& p : parts) {
    EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
    for (auto i : p) {
      ASSERT_LT(i, n);
      ++seen[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(seen[i], 1) << "item " << i;
}

}  // namespace

TEST(Split, SixtyTwentyTwenty) {
  const auto s = split(10, SplitSpec{});
  EXPECT_EQ(s.train.size(), 6u);
  EXPECT_EQ(s.validation.size(), 2u);
  EXPECT_EQ(s.test.size(), 2u);
  expect_partition({s.train, s.validation, s.test}, 10);
}

TEST(Split, LargestRemainderSizes) {
  const std::array<double, 3> r{0.6, 0.2, 0.2};
  EXPECT_EQ(partition_sizes(11, r), (std::vector<std::size_t>{7, 2, 2}));
  EXPECT_EQ(partition_sizes(12, r), (std::vector<std::size_t>{7, 3, 2}));
  const std::array<double, 3> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_EQ(partition_sizes(4, thirds), (std::vector<std::size_t>{2, 1, 1}));
}

TEST(Split, DeterministicUnderSeed) {
  SplitSpec spec;
  spec.seed = 5;
  const auto a = split(57, spec);
  const auto b = split(57, spec);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  spec.seed = 6;
  EXPECT_NE(split(57, spec).train, a.train);
}

TEST(Split, StratifiedKeepsLabelProportions) {
  std::vector<LabelVector> labels(100);
  for (std::size_t i = 0; i < 30; ++i) labels[i][0] = 1;
  SplitSpec spec;
  spec.seed = 3;
  spec.stratify_on = {Dimension::AntiElitism};
  const auto s = split(labels, spec);
  expect_partition({s.train, s.validation, s.test}, 100);
  auto positives = [&](const std::vector<std::size_t>& idx) {
    return std::count_if(idx.begin(), idx.end(), [&](std::size_t i) { return labels[i][0] == 1; });
  };
  EXPECT_EQ(positives(s.train), 18);
  EXPECT_EQ(positives(s.validation), 6);
  EXPECT_EQ(positives(s.test), 6);
}

TEST(Split, ArgumentErrors) {
  SplitSpec spec;
  spec.ratios = {0.6, 0.2, 0.3};
  EXPECT_THROW(split(10, spec), std::invalid_argument);
  spec.ratios = {0.8, 0.2, 0.0};
  EXPECT_THROW(split(10, spec), std::invalid_argument);
  EXPECT_THROW(split(2, SplitSpec{}), std::invalid_argument);
}

TEST(Holdout, TwoWayStratified) {
  std::vector<LabelVector> labels(50);
  for (std::size_t i = 0; i < 50; i += 5) labels[i][1] = 1;
  const auto [rest, held] = holdout(labels, 0.2, 4);
  EXPECT_EQ(held.size(), 10u);
  expect_partition({rest, held}, 50);
  const auto pos = std::count_if(held.begin(), held.end(), [&](auto i) { return labels[i][1] == 1; });
  EXPECT_EQ(pos, 2);
}

TEST(KFold, ExactDivisionAndRemainder) {
  const auto ten = kfold(10, 5, 1);
  ASSERT_EQ(ten.size(), 5u);
  for (const auto& f : ten) EXPECT_EQ(f.test.size(), 2u);
  const auto eleven = kfold(11, 5, 1);
  std::vector<std::size_t> sizes;
  for (const auto& f : eleven) sizes.push_back(f.test.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 2, 2, 2, 2}));
  std::vector<std::vector<std::size_t>> tests;
  for (const auto& f : eleven) {
    tests.push_back(f.test);
    std::vector<std::size_t> complement;
    for (std::size_t i = 0; i < 11; ++i) {
      if (!std::binary_search(f.test.begin(), f.test.end(), i)) complement.push_back(i);
    }
    EXPECT_EQ(f.train, complement);
  }
  expect_partition(tests, 11);
}

TEST(KFold, ArgumentErrors) {
  EXPECT_THROW(kfold(4, 5, 0), std::invalid_argument);
  EXPECT_THROW(kfold(4, 1, 0), std::invalid_argument);
}

TEST(Prf, HandArithmetic) {
  EXPECT_EQ(prf(2, 0, 0), (Prf{1.0, 1.0, 1.0}));
  EXPECT_EQ(prf(0, 0, 5), (Prf{0.0, 0.0, 0.0}));
  EXPECT_EQ(prf(0, 3, 0), (Prf{0.0, 0.0, 0.0}));
  const auto p = prf(3, 1, 2);
  EXPECT_EQ(p.precision, 0.75);
  EXPECT_EQ(p.recall, 0.6);
  EXPECT_NEAR(p.f1, 2 * 0.75 * 0.6 / 1.35, 1e-15);
}

TEST(MicroMacro, HandArithmetic) {
  // Dimensions (tp, fp, fn): (1,0,0), (0,1,1), (0,0,0), (0,0,0).
  // Micro: tp 1, fp 1, fn 1 -> P = R = F1 = 1/2.
  // Macro: P = (1 + 0 + 0 + 0) / 4 = 1/4, likewise R and F1.
  PerDimension<Counts> c{};
  c[0] = {1, 0, 0, 5};
  c[1] = {0, 1, 1, 4};
  const auto mm = micro_macro(c);
  EXPECT_EQ(mm.micro, (Prf{0.5, 0.5, 0.5}));
  EXPECT_EQ(mm.macro, (Prf{0.25, 0.25, 0.25}));
}

TEST(MicroMacro, IdenticalDimensionsCoincide) {
  PerDimension<Counts> c{};
  c.fill(Counts{3, 1, 2, 7});
  const auto mm = micro_macro(c);
  EXPECT_NEAR(mm.micro.f1, mm.macro.f1, 1e-15);
  EXPECT_NEAR(mm.micro.precision, prf(3, 1, 2).precision, 1e-15);
}

TEST(MicroMacro, MacroIsMeanOfPerDimension) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    PerDimension<Counts> c{};
    for (auto& x : c) x = {rng.below(20), rng.below(20), rng.below(20), rng.below(20)};
    const auto mm = micro_macro(c);
    double f = 0, p = 0, r = 0;
    for (const auto& x : c) {
      f += prf(x).f1;
      p += prf(x).precision;
      r += prf(x).recall;
    }
    EXPECT_NEAR(mm.macro.f1, f / 4, 1e-12);
    EXPECT_NEAR(mm.macro.precision, p / 4, 1e-12);
    EXPECT_NEAR(mm.macro.recall, r / 4, 1e-12);
  }
}

TEST(Metrics, FixedFixtures) {
  for (const auto& fx : oracle::metric_fixtures()) {
    SCOPED_TRACE(fx.name);
    std::vector<ProbVector> probs;
    std::vector<LabelVector> gold;
    for (const auto& p : fx.probs) probs.push_back(p);
    for (const auto& g : fx.gold) {
      LabelVector l{};
      for (std::size_t d = 0; d < 4; ++d) l[d] = static_cast<std::uint8_t>(g[d]);
      gold.push_back(l);
    }
    const auto report = evaluate(probs, gold, ThresholdSet{fx.thresholds});
    for (std::size_t d = 0; d < 4; ++d) {
      const auto& c = report.counts[d];
      EXPECT_EQ((std::array<std::size_t, 4>{c.tp, c.fp, c.fn, c.tn}), fx.counts[d]);
      EXPECT_NEAR(report.per_dimension[d].precision, fx.per_dimension[d][0].value(), 1e-15);
      EXPECT_NEAR(report.per_dimension[d].recall, fx.per_dimension[d][1].value(), 1e-15);
      EXPECT_NEAR(report.per_dimension[d].f1, fx.per_dimension[d][2].value(), 1e-15);
    }
    EXPECT_NEAR(report.averages.micro.f1, fx.micro[2].value(), 1e-15);
    EXPECT_NEAR(report.averages.macro.f1, fx.macro[2].value(), 1e-15);
  }
  EXPECT_EQ(oracle::metric_fixtures().size(), 20u);
}

TEST(ThresholdGrid, ExactFractions) {
  const auto g = threshold_grid(0.001);
  ASSERT_EQ(g.size(), 999u);
  EXPECT_EQ(g.front(), 0.001);
  EXPECT_EQ(g[399], 0.4);
  EXPECT_EQ(g.back(), 0.999);
  EXPECT_EQ(threshold_grid(0.1).size(), 9u);
  EXPECT_THROW(threshold_grid(0.0), std::invalid_argument);
  EXPECT_THROW(threshold_grid(0.2), std::invalid_argument);
}

TEST(SearchThreshold, SeparatedExample) {
  const std::vector<double> p{0.1, 0.4, 0.6, 0.9};
  const std::vector<std::uint8_t> g{0, 0, 1, 1};
  const auto r = search_threshold(p, g, 0.001);
  EXPECT_EQ(r.threshold, 0.4);
  EXPECT_EQ(r.f1, 1.0);
  EXPECT_FALSE(r.no_positives);
}

TEST(SearchThreshold, AllPositiveGoldTakesSmallestGridPoint) {
  const std::vector<double> p{0.1, 0.4, 0.6, 0.9};
  const std::vector<std::uint8_t> g{1, 1, 1, 1};
  const auto r = search_threshold(p, g, 0.001);
  EXPECT_EQ(r.threshold, 0.001);
  EXPECT_EQ(r.f1, 1.0);
}

TEST(SearchThreshold, AllNegativeGold) {
  const std::vector<double> p{0.1, 0.9};
  const std::vector<std::uint8_t> g{0, 0};
  const auto r = search_threshold(p, g, 0.001);
  EXPECT_EQ(r.threshold, 0.999);
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_TRUE(r.no_positives);
}

TEST(SearchThreshold, MatchesExhaustiveRescan) {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(80);
    std::vector<double> p(n);
    std::vector<std::uint8_t> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Mix grid-aligned values (exact ties with thresholds) and arbitrary ones.
      p[i] = rng.below(2) ? static_cast<double>(rng.below(101)) / 100.0 : rng.uniform();
      g[i] = static_cast<std::uint8_t>(rng.uniform() < 0.3);
    }
    if (std::count(g.begin(), g.end(), 1) == 0) g[0] = 1;
    const auto r = search_threshold(p, g, 0.01);
    const auto best = oracle::rescan_grid(p, g, 100);
    EXPECT_EQ(r.threshold, best.threshold);
    EXPECT_EQ(r.f1, oracle::to_double(best.f1));
  }
}

TEST(Calibrate, WarnsOnDimensionsWithoutPositives) {
  std::vector<ProbVector> probs{{0.9, 0.2, 0.1, 0.1}, {0.1, 0.8, 0.2, 0.1}};
  std::vector<LabelVector> gold{{1, 0, 0, 0}, {0, 1, 0, 0}};
  const auto c = calibrate(probs, gold, 0.01);
  EXPECT_EQ(c.warnings.size(), 2u);
  EXPECT_EQ(c.file.thresholds.t[0], 0.1);
  EXPECT_EQ(c.file.thresholds.t[1], 0.2);
  EXPECT_EQ(c.file.thresholds.t[2], 0.99);
  EXPECT_EQ((*c.file.f1)[0], 1.0);
}

TEST(Align, MissingPredictionForGoldIsAnError) {
  std::vector<PredictionVector> preds{{"a", {}}, {"b", {}}, {"extra", {}}};
  std::vector<GoldLabelRecord> gold{{"b", {1, 0, 0, 0}, 5}, {"a", {0, 1, 0, 0}, 5}};
  const auto aligned = align_with_gold(preds, gold);
  EXPECT_EQ(aligned.ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(aligned.gold[0], (LabelVector{0, 1, 0, 0}));
  EXPECT_EQ(aligned.unlabeled_predictions, 1u);
  gold.push_back({"zzz", {}, 5});
  EXPECT_THROW(align_with_gold(preds, gold), ValidationError);
}

TEST(MeanStd, SampleStandardDeviation) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto ms = mean_std(v);
  EXPECT_EQ(ms.mean, 2.5);
  EXPECT_NEAR(ms.std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_EQ(mean_std(std::vector<double>{7}).std, 0.0);
}

TEST(Cv, PlantedFixtureIsPerfectAndJobIndependent) {
  const auto cfg = TrainConfig::native();
  const auto planted = oracle::load_planted();
  const auto data = oracle::featurize_all(planted, cfg.features);
  const auto one = evaluate_cv(data, 5, cfg, 0.001, 1);
  const auto many = evaluate_cv(data, 5, cfg, 0.001, 8);
  ASSERT_EQ(one.folds.size(), 5u);
  for (std::size_t d = 0; d < 4; ++d) {
    EXPECT_EQ(one.per_dimension[d][2].mean, 1.0) << display_name(kDimensions[d]);
    EXPECT_EQ(one.per_dimension[d][2].std, 0.0);
  }
  std::ostringstream a, b;
  write_metrics_json(a, one);
  write_metrics_json(b, many);
  EXPECT_EQ(a.str(), b.str());
  std::size_t tested = 0;
  for (const auto& f : one.folds) tested += f.n_test;
  EXPECT_EQ(tested, 80u);
}

TEST(MetricsCsv, LayoutAndRows) {
  PerDimension<Counts> c{};
  c.fill(Counts{1, 1, 0, 2});
  std::ostringstream out;
  write_metrics_csv(out, metrics_from_counts(c));
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "dimension,precision,precision_std,recall,recall_std,f1,f1_std,tp,fp,fn,tn");
  EXPECT_NE(s.find("Anti-Elitism,0.500000,,1.000000,,0.666667,,1,1,0,2"), std::string::npos) << s;
  EXPECT_NE(s.find("micro avg"), std::string::npos);
  EXPECT_NE(s.find("macro avg"), std::string::npos);
}
