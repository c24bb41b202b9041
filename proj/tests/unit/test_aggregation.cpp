#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "popscope/aggregation.hpp"
#include "popscope/error.hpp"
#include "popscope/rng.hpp"

using namespace popscope;

namespace {

SpeechRecord speech(std::string id, int term, std::string first, std::string last,
                    std::string group) {
  SpeechRecord s;
  s.speech_id = std::move(id);
  s.term = term;
  s.speaker_first = std::move(first);
  s.speaker_last = std::move(last);
  s.group = std::move(group);
  s.text = "x";
  return s;
}

struct Corpus {
  std::vector<SpeechRecord> speeches;
  std::vector<SentenceRecord> sentences;
  std::vector<PredictionVector> predictions;

  void add(const std::string& speech_id, std::initializer_list<ProbVector> probs) {
    std::size_t pos = 0;
    for (const auto& p : probs) {
      const std::string id = speech_id + ":" + std::to_string(pos);
      sentences.push_back({id, speech_id, pos, "satz"});
      predictions.push_back({id, p});
      ++pos;
    }
  }
};

ProbVector ae_pc(double ae, double pc) { return ProbVector{ae, pc, 0.0, 0.0}; }

}  // namespace

TEST(Prevalence, PercentAboveThreshold) {
  std::vector<PredictionVector> preds{{"a", {0.9, 0.1, 0.5, 0.6}},
                                      {"b", {0.2, 0.1, 0.5, 0.4}},
                                      {"c", {0.5, 0.1, 0.5, 0.4}},
                                      {"d", {0.1, 0.7, 0.5, 0.4}}};
  const auto p = prevalence(preds, ThresholdSet{});
  EXPECT_EQ(p, (ProbVector{25.0, 25.0, 0.0, 25.0}));
  EXPECT_THROW(prevalence({}, ThresholdSet{}), std::invalid_argument);
}

TEST(UnitMeans, PartyMeansPoolSentences) {
  Corpus c;
  c.speeches = {speech("s1", 19, "Anna", "Berg", "A"), speech("s2", 19, "Carl", "Dorn", "A")};
  c.add("s1", {ae_pc(0.2, 0), ae_pc(0.4, 0), ae_pc(0.2, 0), ae_pc(0.4, 0)});
  c.add("s2", {ae_pc(0.3, 0), ae_pc(0.3, 0), ae_pc(0.3, 0), ae_pc(0.3, 0)});
  const auto r = unit_means(c.predictions, c.sentences, c.speeches, Level::Party);
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_EQ(r.scores[0].key, "A");
  EXPECT_EQ(r.scores[0].n_sentences, 8u);
  EXPECT_NEAR(r.scores[0].means[0], 0.3, 1e-15);
}

TEST(UnitMeans, ShortSpeechesAreExcluded) {
  Corpus c;
  c.speeches = {speech("s1", 19, "Anna", "Berg", "A"), speech("s2", 19, "Anna", "Berg", "A")};
  c.add("s1", {ae_pc(0.1, 0), ae_pc(0.1, 0), ae_pc(0.1, 0), ae_pc(0.1, 0)});
  c.add("s2", {ae_pc(0.9, 0), ae_pc(0.9, 0), ae_pc(0.9, 0)});
  const auto r = unit_means(c.predictions, c.sentences, c.speeches, Level::Politician);
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_EQ(r.scores[0].key, "Anna Berg (A)");
  EXPECT_EQ(r.excluded_speeches, 1u);
  EXPECT_NEAR(r.scores[0].means[0], 0.1, 1e-15);
  const auto all = unit_means(c.predictions, c.sentences, c.speeches, Level::Speech, 1);
  EXPECT_EQ(all.scores.size(), 2u);
  EXPECT_THROW(unit_means(c.predictions, c.sentences, c.speeches, Level::Speech, 0),
               std::invalid_argument);
}

TEST(UnitMeans, UnknownSentencesAndSpeechesAreErrors) {
  Corpus c;
  c.speeches = {speech("s1", 19, "Anna", "Berg", "A")};
  c.add("s1", {ae_pc(0.1, 0)});
  auto preds = c.predictions;
  preds.push_back({"ghost:0", {}});
  EXPECT_THROW(unit_means(preds, c.sentences, c.speeches, Level::Party, 1), ValidationError);
  auto sentences = c.sentences;
  sentences.push_back({"s9:0", "s9", 0, "satz"});
  EXPECT_THROW(unit_means(c.predictions, sentences, c.speeches, Level::Party, 1),
               ValidationError);
}

TEST(UnitMeans, MissingPredictionsAreCounted) {
  Corpus c;
  c.speeches = {speech("s1", 20, "Anna", "Berg", "A")};
  c.add("s1", {ae_pc(0.5, 0.5), ae_pc(0.5, 0.5)});
  c.predictions.pop_back();
  const auto r = unit_means(c.predictions, c.sentences, c.speeches, Level::Party, 1);
  EXPECT_EQ(r.sentences_without_prediction, 1u);
  EXPECT_EQ(r.scores[0].term, 20);
}

TEST(Index, ProductOfCoreMeans) {
  EXPECT_NEAR(populism_index(ProbVector{0.5, 0.4, 0.9, 0.9}), 0.2, 1e-16);
  EXPECT_EQ(populism_index(ProbVector{0.0, 0.9, 1.0, 1.0}), 0.0);
  EXPECT_EQ(populism_index(ProbVector{0.9, 0.0, 1.0, 1.0}), 0.0);
  EXPECT_LT(populism_index(ProbVector{0.8, 0.1, 0, 0}), populism_index(ProbVector{0.45, 0.45, 0, 0}));
}

TEST(Index, SymmetricAndMonotone) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(), b = rng.uniform(), e = rng.uniform() * (1 - a);
    EXPECT_EQ(populism_index(ProbVector{a, b, 0, 0}), populism_index(ProbVector{b, a, 0, 0}));
    EXPECT_GE(populism_index(ProbVector{a + e, b, 0, 0}), populism_index(ProbVector{a, b, 0, 0}));
  }
}

TEST(Rank, OrderTiesAndTopN) {
  std::vector<RankEntry> e{{"b", 19, 0.5}, {"a", 19, 0.5}, {"c", 19, 0.9},
                           {"z", 20, 0.1}, {"y", 20, 0.2}};
  const auto all = rank_units(e, 0);
  std::vector<std::string> keys;
  for (const auto& r : all) keys.push_back(r.key);
  EXPECT_EQ(keys, (std::vector<std::string>{"c", "a", "b", "y", "z"}));
  const auto top = rank_units(e, 1);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].key, "c");
  EXPECT_EQ(top[1].key, "y");
}

TEST(Rank, InvariantUnderPositiveScaling) {
  Rng rng(5);
  std::vector<RankEntry> e;
  for (int i = 0; i < 60; ++i) {
    e.push_back({"u" + std::to_string(i), 19 + static_cast<int>(rng.below(2)),
                 static_cast<double>(rng.below(10)) / 10.0});
  }
  auto scaled = e;
  for (auto& x : scaled) x.value *= 3.5;
  const auto a = rank_units(e, 0), b = rank_units(scaled, 0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].key, b[i].key);
}

TEST(Normalize, DividesByMaximum) {
  const std::vector<double> v{2, 4};
  EXPECT_EQ(normalize_max(v).values, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(normalize_max(std::vector<double>{3}).values, (std::vector<double>{1.0}));
  const auto zero = normalize_max(std::vector<double>{0, 0});
  EXPECT_FALSE(zero.normalized);
  EXPECT_EQ(zero.values, (std::vector<double>{0, 0}));
}

TEST(Normalize, PreservesRatios) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(2 + rng.below(10));
    for (auto& x : v) x = 0.01 + rng.uniform();
    const auto n = normalize_max(v);
    EXPECT_EQ(*std::max_element(n.values.begin(), n.values.end()), 1.0);
    for (std::size_t i = 1; i < v.size(); ++i) {
      EXPECT_NEAR(n.values[i] / n.values[0], v[i] / v[0], 1e-12);
    }
  }
}

TEST(Pearson, HandValues) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_NEAR(pearson(x, std::vector<double>{2, 4, 6, 8}), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, std::vector<double>{8, 6, 4, 2}), -1.0, 1e-15);
  // Deviations (-1.5, -.5, .5, 1.5) and (-.5, -1.5, 1.5, .5): 3 / 5.
  EXPECT_NEAR(pearson(x, std::vector<double>{2, 1, 4, 3}), 0.6, 1e-15);
}

TEST(Pearson, UndefinedAndInvalidInputs) {
  const std::vector<double> x{1, 2, 3};
  try {
    pearson(x, std::vector<double>{5, 5, 5});
    FAIL();
  } catch (const UndefinedResultError& e) {
    EXPECT_NE(std::string(e.what()).find("ys"), std::string::npos);
  }
  try {
    pearson(std::vector<double>{1, 1, 1}, x);
    FAIL();
  } catch (const UndefinedResultError& e) {
    EXPECT_NE(std::string(e.what()).find("xs"), std::string::npos);
  }
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}

TEST(Pearson, InvariantUnderJointShuffleAndAffineMaps) {
  Rng rng(44);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::pair<double, double>> xy(3 + rng.below(20));
    for (auto& p : xy) p = {rng.uniform(), rng.uniform()};
    auto unzip = [](const auto& pairs, std::vector<double>& a, std::vector<double>& b) {
      a.clear();
      b.clear();
      for (const auto& p : pairs) {
        a.push_back(p.first);
        b.push_back(p.second);
      }
    };
    std::vector<double> a, b;
    unzip(xy, a, b);
    const double r = pearson(a, b);
    rng.shuffle(std::span(xy));
    unzip(xy, a, b);
    EXPECT_NEAR(pearson(a, b), r, 1e-12);
    for (auto& v : a) v = 2.0 * v + 7.0;
    EXPECT_NEAR(pearson(a, b), r, 1e-12);
  }
}

TEST(Survey, CorrelationThroughMapping) {
  std::vector<AggregateScore> party{
      {Level::Party, "A", 19, {0.1, 0.2, 0, 0}, 10},
      {Level::Party, "B", 19, {0.2, 0.1, 0, 0}, 10},
      {Level::Party, "C", 19, {0.4, 0.3, 0, 0}, 10},
      {Level::Party, "X", 19, {0.4, 0.3, 0, 0}, 10},
  };
  std::vector<ExpertSurveyRow> survey{
      {"Alpha", 1.0, 4.0, 2017}, {"B", 2.0, 2.0, 2017}, {"C", 4.0, 6.0, 2017}, {"Q", 1, 1, 2017}};
  const auto r = correlate_survey(party, survey, {{"A", "Alpha"}});
  EXPECT_NEAR(r.r_antielite, 1.0, 1e-15);
  EXPECT_NEAR(r.r_pplcentr, 1.0, 1e-15);
  EXPECT_EQ(r.matched.size(), 3u);
  EXPECT_EQ(r.unmatched_groups, (std::vector<std::string>{"X"}));
  EXPECT_EQ(r.unmatched_survey, (std::vector<std::string>{"Q"}));
  EXPECT_THROW(correlate_survey(std::span(party).first(1), survey, {{"A", "Alpha"}}),
               ValidationError);
}

TEST(Survey, ReadsCsv) {
  std::istringstream in("party,antielite_salience,people_vs_elite,year\nP,7.5,3,2017\n");
  const auto rows = read_survey_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].antielite_salience, 7.5);
  EXPECT_EQ(rows[0].year, 2017);
}

TEST(CoreRate, EitherCoreDimension) {
  std::vector<PredictionVector> none{{"a", {0.1, 0.1, 0.9, 0.9}}, {"b", {0.5, 0.5, 0.9, 0.9}}};
  EXPECT_EQ(any_core_rate(none, ThresholdSet{}).rate, 0.0);
  std::vector<PredictionVector> half{{"a", {0.1, 0.6, 0, 0}},
                                     {"b", {0.7, 0.1, 0, 0}},
                                     {"c", {0.1, 0.1, 0, 0}},
                                     {"d", {0.2, 0.3, 0, 0}}};
  const auto f = any_core_rate(half, ThresholdSet{});
  EXPECT_EQ(f.rate, 0.5);
  EXPECT_EQ(f.flagged, (std::vector<std::string>{"a", "b"}));
}

TEST(AggregatesCsv, RoundTrip) {
  std::vector<AggregateScore> scores{{Level::Politician, "Anna Berg (A, B)", 19, {0.125, 0.5, 0, 1}, 7}};
  std::ostringstream out;
  write_aggregates_csv(out, scores);
  EXPECT_NE(out.str().find("\"Anna Berg (A, B)\""), std::string::npos);
  EXPECT_NE(out.str().find(",0.06250000\n"), std::string::npos);
  std::istringstream in(out.str());
  const auto back = read_aggregates_csv(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].key, scores[0].key);
  EXPECT_EQ(back[0].means, scores[0].means);
  EXPECT_EQ(back[0].level, Level::Politician);
  std::istringstream bad("level,key,term,n_sentences,antielite,pplcentr,left,right\nparty,A,19,3,1.5,0,0,0\n");
  EXPECT_THROW(read_aggregates_csv(bad), ValidationError);
}

TEST(Figures, NormalizedPerTermAndDimension) {
  std::vector<AggregateScore> party{{Level::Party, "A", 19, {0.2, 0.1, 0, 0.5}, 4},
                                    {Level::Party, "B", 19, {0.4, 0.05, 0, 0.25}, 4}};
  const auto fig = party_profile_figure(party);
  ASSERT_EQ(fig.rows.size(), 8u);
  EXPECT_EQ(fig.rows[0].group, "A");
  EXPECT_EQ(fig.rows[0].normalized_value, 0.5);
  EXPECT_EQ(fig.rows[1].normalized_value, 1.0);
  EXPECT_EQ(fig.warnings.size(), 1u);  // left is zero everywhere
}

TEST(Figures, IndexFigureAveragesSpeeches) {
  std::vector<SpeechRecord> speeches{speech("s1", 19, "a", "b", "A"), speech("s2", 19, "c", "d", "A")};
  std::vector<AggregateScore> scores{{Level::Speech, "s1", 19, {0.5, 0.5, 0, 0}, 4},
                                     {Level::Speech, "s2", 19, {0.5, 0.1, 0, 0}, 4}};
  const auto fig = party_index_figure(scores, speeches);
  ASSERT_EQ(fig.rows.size(), 1u);
  EXPECT_NEAR(fig.rows[0].value, 0.15, 1e-16);
  EXPECT_EQ(fig.rows[0].normalized_value, 1.0);
}

TEST(Oos, DemoFixtureParses) {
  const auto rows = read_oos_fixture(oracle::source_dir() / "data/toy/oos_demo.tsv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0].id, "demo-01");
  EXPECT_EQ(rows[0].expected,
            (std::vector<Dimension>{Dimension::AntiElitism, Dimension::PeopleCentrism}));
  std::istringstream dup("id\ttext\texpected_dimensions\tsource\na\tx\t\ts\na\ty\t\ts\n");
  EXPECT_THROW(read_oos_fixture(dup), ValidationError);
}
