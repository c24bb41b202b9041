#include <gtest/gtest.h>

#include <sstream>

#include "popscope/error.hpp"
#include "popscope/predictions.hpp"
#include "popscope/rng.hpp"

using namespace popscope;

namespace {

const char* kHeader = "sentence_id\tp_antielite\tp_pplcentr\tp_left\tp_right\n";

std::string error_of(const std::string& body) {
  std::istringstream in(kHeader + body);
  try {
    import_external_scores(in);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ImportScores, WellFormedFile) {
  std::istringstream in(std::string(kHeader) +
                        "a:1\t0.9\t0.1\t0\t1\n"
                        "a:2\t0.5\t0.5\t0.5\t0.5\n"
                        "b:1\t1e-3\t0.25\t0.75\t0.333\n");
  const auto preds = import_external_scores(in);
  ASSERT_EQ(preds.size(), 3u);
  EXPECT_EQ(preds[2].sentence_id, "b:1");
  EXPECT_EQ(preds[2].p[0], 0.001);
  EXPECT_EQ(preds[0].p[3], 1.0);
}

TEST(ImportScores, OutOfRangeNamesLine) {
  const auto msg = error_of("a:1\t0.2\t0.2\t0.2\t0.2\na:2\t1.3\t0.1\t0.1\t0.1\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(ImportScores, DuplicateIdNamesLine) {
  const auto msg = error_of("a:1\t0.2\t0.2\t0.2\t0.2\na:1\t0.3\t0.1\t0.1\t0.1\n");
  EXPECT_NE(msg.find("a:1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(ImportScores, RejectsUnparsableAndMissingColumns) {
  EXPECT_FALSE(error_of("a:1\tx\t0.2\t0.2\t0.2\n").empty());
  EXPECT_FALSE(error_of("a:1\tnan\t0.2\t0.2\t0.2\n").empty());
  std::istringstream in("sentence_id\tp_antielite\na\t0.1\n");
  EXPECT_THROW(import_external_scores(in), ValidationError);
}

TEST(ImportScores, HeaderOnlyIsEmpty) {
  std::istringstream in(kHeader);
  EXPECT_TRUE(import_external_scores(in).empty());
}

TEST(PredictionsTsv, RoundTripAtSixDecimals) {
  std::vector<PredictionVector> preds{{"x", {0.1234564, 0.5, 1.0, 0.0}}};
  std::ostringstream out;
  write_predictions_tsv(out, preds);
  EXPECT_EQ(out.str(), std::string(kHeader) + "x\t0.123456\t0.500000\t1.000000\t0.000000\n");
  std::istringstream in(out.str());
  EXPECT_EQ(import_external_scores(in)[0].p[0], 0.123456);
}

TEST(Thresholds, PublishedValues) {
  const auto t = ThresholdSet::published();
  EXPECT_EQ(t.t, (ProbVector{0.501, 0.502, 0.422, 0.383}));
  EXPECT_NO_THROW(t.validate());
  EXPECT_THROW((ThresholdSet{{0.5, 0.5, 1.0, 0.5}}.validate()), std::invalid_argument);
  EXPECT_THROW((ThresholdSet{{0.0, 0.5, 0.5, 0.5}}.validate()), std::invalid_argument);
}

TEST(Thresholds, JsonRoundTrip) {
  ThresholdFile file{ThresholdSet{{0.325, 0.355, 0.015, 0.011}}, 0.001,
                     ProbVector{1.0, 0.9, 0.5, 2.0 / 3.0}};
  std::stringstream buf;
  write_thresholds_json(buf, file);
  const auto back = read_thresholds_json(buf);
  EXPECT_EQ(back.thresholds.t, file.thresholds.t);
  EXPECT_EQ(back.grid_step, file.grid_step);
  ASSERT_TRUE(back.f1.has_value());
  EXPECT_EQ(*back.f1, *file.f1);

  std::istringstream minimal(
      R"({"thresholds":{"antielite":0.4,"pplcentr":0.5,"left":0.6,"right":0.7}})");
  const auto m = read_thresholds_json(minimal);
  EXPECT_EQ(m.thresholds.t[2], 0.6);
  EXPECT_FALSE(m.grid_step.has_value());

  std::istringstream missing(R"({"thresholds":{"antielite":0.4}})");
  EXPECT_THROW(read_thresholds_json(missing), ValidationError);
}

TEST(Binarize, StrictComparison) {
  const ThresholdSet t{{0.501, 0.502, 0.422, 0.383}};
  EXPECT_EQ(binarize(ProbVector{0.501, 0.502, 0.422, 0.383}, t), (LabelVector{0, 0, 0, 0}));
  EXPECT_EQ(binarize(ProbVector{1, 1, 1, 1}, t), (LabelVector{1, 1, 1, 1}));
  EXPECT_EQ(binarize(ProbVector{0.5011, 0.1, 0.9, 0.383}, t), (LabelVector{1, 0, 1, 0}));
}

TEST(Binarize, AgreesWithNaiveComparison) {
  Rng rng(8);
  std::vector<PredictionVector> preds;
  for (int i = 0; i < 500; ++i) {
    ProbVector p{};
    for (auto& x : p) x = static_cast<double>(rng.below(1001)) / 1000.0;
    preds.push_back({"s" + std::to_string(i), p});
  }
  const ThresholdSet t{{0.5, 0.25, 0.75, 0.001}};
  const auto labels = binarize(preds, t);
  ASSERT_EQ(labels.size(), preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t d = 0; d < 4; ++d) {
      EXPECT_EQ(labels[i][d], preds[i].p[d] > t.t[d] ? 1 : 0);
    }
  }
}
