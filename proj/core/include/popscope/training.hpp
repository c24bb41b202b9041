#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "popscope/classifier.hpp"
#include "popscope/error.hpp"

namespace popscope {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Optimizer and schedule settings. Weight decay is decoupled (AdamW) and
/// applies to W only.
struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 64;
  double lr_init = 0.1;
  double lr_floor = 1e-4;
  double weight_decay = 1e-4;
  AdamConfig adam;
  std::uint64_t seed = 0;
  FeatureConfig features;

  /// Defaults tuned for sparse linear features.
  static TrainConfig native();
  /// The transformer fine-tuning settings: batch 16, lr 4e-6 annealed to
  /// 1e-9, weight decay 1e-2, 13 epochs.
  static TrainConfig paper_gbert();
  /// "native" or "paper-gbert"; throws std::invalid_argument otherwise.
  static TrainConfig preset(std::string_view name);

  /// Throws std::invalid_argument unless lr_init > lr_floor > 0,
  /// epochs >= 1 and batch_size >= 1.
  void validate() const;
};

/// lr(s) = floor + (init - floor) * (1 + cos(pi * s / (T - 1))) / 2 for
/// s = 0 .. T-1, so the first step uses lr_init and the last lr_floor.
/// With a single step the rate is lr_init.
class CosineSchedule {
 public:
  CosineSchedule(double lr_init, double lr_floor, std::size_t total_steps);

  double at(std::size_t step) const;
  std::size_t total_steps() const { return total_steps_; }

 private:
  double init_;
  double floor_;
  std::size_t total_steps_;
};

/// Raised when the loss becomes non-finite.
class TrainingError : public Error {
 public:
  TrainingError(double lr, std::size_t epoch, std::size_t batch, double loss);

  double lr;
  std::size_t epoch;
  std::size_t batch;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> validation_loss;
  double last_lr = 0.0;
};

struct TrainResult {
  BaselineModel model;
  std::vector<EpochLog> log;
  std::vector<std::string> warnings;
};

/// Mini-batch AdamW with cosine annealing from a zero initialization.
/// Batches are drawn from a per-epoch shuffle seeded by config.seed and all
/// reductions run in a fixed order, so equal inputs give bit-identical
/// models. Dimensions lacking positives or negatives produce a warning.
TrainResult train_baseline(std::span<const LabeledExample> train, const TrainConfig& config,
                           std::span<const LabeledExample> validation = {});

}  // namespace popscope
