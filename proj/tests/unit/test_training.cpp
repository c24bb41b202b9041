#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "popscope/predictions.hpp"
#include "popscope/training.hpp"

using namespace popscope;

namespace {

std::vector<LabeledExample> separable_twenty(const FeatureConfig& features) {
  auto planted = oracle::load_planted();
  planted.resize(20);
  return oracle::featurize_all(planted, features);
}

std::string model_bytes(const BaselineModel& model) {
  std::ostringstream out;
  save_model(out, model);
  return out.str();
}

}  // namespace

TEST(Cosine, EndpointsAndMonotonicity) {
  const CosineSchedule s(0.1, 1e-4, 40);
  EXPECT_NEAR(s.at(0), 0.1, 1e-15);
  EXPECT_NEAR(s.at(39), 1e-4, 1e-15);
  for (std::size_t i = 1; i < 40; ++i) EXPECT_LE(s.at(i), s.at(i - 1));
  EXPECT_NEAR(s.at(20), 1e-4 + (0.1 - 1e-4) * (1 + std::cos(M_PI * 20 / 39)) / 2, 1e-16);
  EXPECT_EQ(CosineSchedule(0.1, 1e-4, 1).at(0), 0.1);
  EXPECT_THROW(CosineSchedule(0.1, 1e-4, 0), std::invalid_argument);
}

TEST(Cosine, GbertPresetEndpoints) {
  const auto cfg = TrainConfig::paper_gbert();
  const CosineSchedule s(cfg.lr_init, cfg.lr_floor, 13 * 179);
  EXPECT_NEAR(s.at(0), 4e-6, 1e-15);
  EXPECT_NEAR(s.at(13 * 179 - 1), 1e-9, 1e-15);
}

TEST(TrainConfig, Presets) {
  const auto gbert = TrainConfig::preset("paper-gbert");
  EXPECT_EQ(gbert.epochs, 13u);
  EXPECT_EQ(gbert.batch_size, 16u);
  EXPECT_EQ(gbert.lr_init, 4e-6);
  EXPECT_EQ(gbert.lr_floor, 1e-9);
  EXPECT_EQ(gbert.weight_decay, 1e-2);
  const auto native = TrainConfig::preset("native");
  EXPECT_NO_THROW(native.validate());
  EXPECT_THROW(TrainConfig::preset("bert"), std::invalid_argument);
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  cfg.lr_floor = cfg.lr_init;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Train, SeparableSetLossDecreasesAndFitsExactly) {
  TrainConfig cfg = TrainConfig::native();
  // At the default rate the first full-batch Adam step overshoots on this set.
  cfg.lr_init = 0.01;
  cfg.lr_floor = 1e-5;
  const auto data = separable_twenty(cfg.features);
  const auto result = train_baseline(data, cfg);
  ASSERT_EQ(result.log.size(), cfg.epochs);
  for (std::size_t i = 1; i < result.log.size(); ++i) {
    EXPECT_LT(result.log[i].train_loss, result.log[i - 1].train_loss) << "epoch " << i + 1;
  }
  for (const auto& ex : data) {
    EXPECT_EQ(binarize(predict_proba(result.model, ex.features), ThresholdSet{}), ex.gold);
  }
}

TEST(Train, NegligibleLearningRateLeavesInitialization) {
  TrainConfig cfg = TrainConfig::native();
  cfg.epochs = 1;
  cfg.lr_init = 1e-14;
  cfg.lr_floor = 1e-15;
  const auto data = separable_twenty(cfg.features);
  const auto result = train_baseline(data, cfg);
  for (double w : result.model.weights()) EXPECT_LE(std::fabs(w), 1e-12);
  for (double b : result.model.bias()) EXPECT_LE(std::fabs(b), 1e-12);
}

TEST(Train, BitIdenticalAcrossRuns) {
  TrainConfig cfg = TrainConfig::native();
  cfg.epochs = 5;
  cfg.seed = 99;
  const auto data = separable_twenty(cfg.features);
  EXPECT_EQ(model_bytes(train_baseline(data, cfg).model),
            model_bytes(train_baseline(data, cfg).model));
  cfg.seed = 100;
  cfg.batch_size = 4;
  const auto a = model_bytes(train_baseline(data, cfg).model);
  cfg.seed = 101;
  EXPECT_NE(a, model_bytes(train_baseline(data, cfg).model));
}

TEST(Train, LogsValidationLossAndLearningRate) {
  TrainConfig cfg = TrainConfig::native();
  cfg.epochs = 3;
  cfg.batch_size = 8;
  auto data = separable_twenty(cfg.features);
  std::vector<LabeledExample> validation(data.begin() + 15, data.end());
  data.resize(15);
  const auto result = train_baseline(data, cfg, validation);
  ASSERT_EQ(result.log.size(), 3u);
  EXPECT_TRUE(result.log[0].validation_loss.has_value());
  EXPECT_NEAR(result.log.back().last_lr, cfg.lr_floor, 1e-15);
}

TEST(Train, WarnsAboutDimensionsWithoutPositives) {
  TrainConfig cfg = TrainConfig::native();
  cfg.epochs = 1;
  auto data = separable_twenty(cfg.features);
  for (auto& ex : data) ex.gold[3] = 0;
  const auto result = train_baseline(data, cfg);
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_NE(result.warnings[0].find("Right-Wing"), std::string::npos);
}

TEST(Train, NonFiniteLossAbortsWithDiagnostics) {
  TrainConfig cfg = TrainConfig::native();
  auto data = separable_twenty(cfg.features);
  data[0].features.entries[0].weight = std::numeric_limits<double>::quiet_NaN();
  cfg.batch_size = 64;
  try {
    train_baseline(data, cfg);
    FAIL();
  } catch (const TrainingError& e) {
    EXPECT_EQ(e.epoch, 1u);
    EXPECT_EQ(e.batch, 0u);
    EXPECT_NEAR(e.lr, cfg.lr_init, 1e-15);
  }
}

TEST(Train, EmptyTrainingSetRejected) {
  EXPECT_THROW(train_baseline({}, TrainConfig::native()), std::invalid_argument);
}
