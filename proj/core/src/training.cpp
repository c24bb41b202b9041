#include "popscope/training.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "popscope/rng.hpp"

namespace popscope {

TrainConfig TrainConfig::native() { return TrainConfig{}; }

TrainConfig TrainConfig::paper_gbert() {
  TrainConfig c;
  c.epochs = 13;
  c.batch_size = 16;
  c.lr_init = 4e-6;
  c.lr_floor = 1e-9;
  c.weight_decay = 1e-2;
  return c;
}

TrainConfig TrainConfig::preset(std::string_view name) {
  if (name == "native") return native();
  if (name == "paper-gbert") return paper_gbert();
  throw std::invalid_argument(fmt::format("unknown training preset '{}'", name));
}

void TrainConfig::validate() const {
  if (!(lr_floor > 0.0) || !(lr_init > lr_floor)) {
    throw std::invalid_argument("learning rates must satisfy lr_init > lr_floor > 0");
  }
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  if (weight_decay < 0.0) throw std::invalid_argument("weight_decay must be non-negative");
  features.validate();
}

CosineSchedule::CosineSchedule(double lr_init, double lr_floor, std::size_t total_steps)
    : init_(lr_init), floor_(lr_floor), total_steps_(total_steps) {
  if (total_steps == 0) throw std::invalid_argument("schedule needs at least one step");
}

double CosineSchedule::at(std::size_t step) const {
  if (total_steps_ == 1) return init_;
  const double progress =
      static_cast<double>(std::min(step, total_steps_ - 1)) / static_cast<double>(total_steps_ - 1);
  return floor_ + (init_ - floor_) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

TrainingError::TrainingError(double lr_, std::size_t epoch_, std::size_t batch_, double loss)
    : Error(fmt::format("non-finite training loss {} at epoch {}, batch {} (lr {})", loss, epoch_,
                        batch_, lr_)),
      lr(lr_), epoch(epoch_), batch(batch_) {}

namespace {

struct AdamState {
  std::vector<double> m_w, v_w;
  PerDimension<double> m_b{}, v_b{};
};

}  // namespace

TrainResult train_baseline(std::span<const LabeledExample> train, const TrainConfig& config,
                           std::span<const LabeledExample> validation) {
  config.validate();
  if (train.empty()) throw std::invalid_argument("training set is empty");

  TrainResult result{BaselineModel(config.features, config.seed), {}, {}};
  BaselineModel& model = result.model;
  const std::uint32_t size = model.hash_size();

  for (Dimension d : kDimensions) {
    const auto positives = std::count_if(train.begin(), train.end(), [&](const LabeledExample& e) {
      return e.gold[index_of(d)] != 0;
    });
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(train.size())) {
      result.warnings.push_back(
          fmt::format("{} has only {} examples; its head trains toward the prior",
                      display_name(d), positives == 0 ? "negative" : "positive"));
    }
  }

  const std::size_t batches_per_epoch = (train.size() + config.batch_size - 1) / config.batch_size;
  const CosineSchedule schedule(config.lr_init, config.lr_floor, config.epochs * batches_per_epoch);

  AdamState adam;
  adam.m_w.assign(model.weights().size(), 0.0);
  adam.v_w.assign(model.weights().size(), 0.0);
  std::vector<double> grad_w(model.weights().size(), 0.0);
  PerDimension<double> grad_b{};
  std::vector<std::uint32_t> touched;
  // Feature indices that have ever received a gradient. Untouched weights
  // stay exactly zero under AdamW, so only these need updating.
  std::vector<std::uint32_t> active;
  std::vector<char> is_active(size, 0);

  std::vector<std::size_t> order(train.size());
  std::vector<const LabeledExample*> batch;
  Rng rng(config.seed);
  const auto& adam_cfg = config.adam;
  std::size_t step = 0;
  double beta1_pow = 1.0;
  double beta2_pow = 1.0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    double lr = schedule.at(step);
    for (std::size_t b = 0; b < batches_per_epoch; ++b, ++step) {
      lr = schedule.at(step);
      const std::size_t begin = b * config.batch_size;
      const std::size_t end = std::min(train.size(), begin + config.batch_size);
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) batch.push_back(&train[order[i]]);

      touched.clear();
      grad_b.fill(0.0);
      const double loss = detail::accumulate_bce_gradient(
          model, std::span<const LabeledExample* const>(batch), grad_w, grad_b, &touched);
      if (!std::isfinite(loss)) throw TrainingError(lr, epoch, b, loss);

      bool grew = false;
      for (std::uint32_t idx : touched) {
        if (!is_active[idx]) {
          is_active[idx] = 1;
          active.push_back(idx);
          grew = true;
        }
      }
      if (grew) std::sort(active.begin(), active.end());

      beta1_pow *= adam_cfg.beta1;
      beta2_pow *= adam_cfg.beta2;
      const double c1 = 1.0 - beta1_pow;
      const double c2 = 1.0 - beta2_pow;
      const double decay = 1.0 - lr * config.weight_decay;
      auto update = [&](double& w, double& m, double& v, double g, double keep) {
        m = adam_cfg.beta1 * m + (1.0 - adam_cfg.beta1) * g;
        v = adam_cfg.beta2 * v + (1.0 - adam_cfg.beta2) * g * g;
        w *= keep;
        w -= lr * (m / c1) / (std::sqrt(v / c2) + adam_cfg.epsilon);
      };
      auto weights = model.weights();
      for (std::size_t d = 0; d < kNumDimensions; ++d) {
        const std::size_t row = d * size;
        for (std::uint32_t idx : active) {
          const std::size_t k = row + idx;
          update(weights[k], adam.m_w[k], adam.v_w[k], grad_w[k], decay);
          grad_w[k] = 0.0;
        }
        update(model.bias()[d], adam.m_b[d], adam.v_b[d], grad_b[d], 1.0);
      }
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = bce_loss(model, train);
    if (!validation.empty()) entry.validation_loss = bce_loss(model, validation);
    entry.last_lr = lr;
    if (!std::isfinite(entry.train_loss)) {
      throw TrainingError(lr, epoch, batches_per_epoch - 1, entry.train_loss);
    }
    result.log.push_back(entry);
  }
  return result;
}

}  // namespace popscope
