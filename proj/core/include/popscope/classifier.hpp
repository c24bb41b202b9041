#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "popscope/dimension.hpp"
#include "popscope/features.hpp"

namespace popscope {

/// Four independent logistic heads over shared hashed n-gram features:
/// p_d = sigmoid(W_d . x + b_d). Parameters start at zero.
class BaselineModel {
 public:
  explicit BaselineModel(FeatureConfig features = {}, std::uint64_t seed = 0);

  const FeatureConfig& features() const { return features_; }
  std::uint32_t hash_size() const { return features_.hash_size(); }
  std::uint64_t seed() const { return seed_; }

  /// Row-major 4 x 2^B weight matrix.
  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }
  double& weight(Dimension d, std::uint32_t index) {
    return weights_[index_of(d) * hash_size() + index];
  }
  double weight(Dimension d, std::uint32_t index) const {
    return weights_[index_of(d) * hash_size() + index];
  }

  PerDimension<double>& bias() { return bias_; }
  const PerDimension<double>& bias() const { return bias_; }

  /// W x + b. Throws std::invalid_argument when a feature index is outside
  /// the model's hash space.
  PerDimension<double> logits(const FeatureVector& x) const;

  friend bool operator==(const BaselineModel&, const BaselineModel&) = default;

 private:
  FeatureConfig features_;
  std::uint64_t seed_ = 0;
  std::vector<double> weights_;
  PerDimension<double> bias_{};
};

/// Logistic function; exact limits for large |z|, no overflow.
double sigmoid(double z);

ProbVector predict_proba(const BaselineModel& model, const FeatureVector& features);

/// Featurizes and scores every text; output order follows input order for
/// any number of jobs.
std::vector<ProbVector> predict_texts(const BaselineModel& model, std::span<const std::string> texts,
                                      unsigned jobs = 1);

struct LabeledExample {
  FeatureVector features;
  LabelVector gold{};
};

struct Gradient {
  std::vector<double> weights;  // same layout as BaselineModel::weights()
  PerDimension<double> bias{};
};

struct LossAndGradient {
  double loss = 0.0;
  Gradient gradient;
};

/// Probabilities are clamped to [eps, 1 - eps] inside the loss only.
inline constexpr double kProbabilityClamp = 1e-12;

/// Mean binary cross-entropy over examples and dimensions, and its gradient
/// with respect to (W, b). Weight decay is not part of the objective; it is
/// applied in the optimizer step. Throws std::invalid_argument on an empty
/// batch.
LossAndGradient bce_loss_and_grad(const BaselineModel& model, std::span<const LabeledExample> batch);

double bce_loss(const BaselineModel& model, std::span<const LabeledExample> batch);

namespace detail {

/// Adds the mean-BCE gradient of `batch` into `grad_weights`/`grad_bias`
/// (which the caller zeroes) and returns the batch loss. Indices of touched
/// weights (feature index, not offset) are appended to `touched`.
double accumulate_bce_gradient(const BaselineModel& model, std::span<const LabeledExample> batch,
                               std::span<double> grad_weights, PerDimension<double>& grad_bias,
                               std::vector<std::uint32_t>* touched);
double accumulate_bce_gradient(const BaselineModel& model,
                               std::span<const LabeledExample* const> batch,
                               std::span<double> grad_weights, PerDimension<double>& grad_bias,
                               std::vector<std::uint32_t>* touched);

}  // namespace detail

/// Binary model container (little-endian):
///   "PSBM" | u32 version | u32 hash_bits | u8 lowercase | u8 unigrams |
///   u8 bigrams | u8 char_min | u8 char_max | u64 seed | f64 bias[4] |
///   per dimension: u32 count, count x (u32 index, f64 weight)
/// Only weights whose bit pattern is non-zero are stored, so a round trip is
/// bit-exact.
void save_model(std::ostream& out, const BaselineModel& model);
BaselineModel load_model(std::istream& in);
void save_model(const std::filesystem::path& path, const BaselineModel& model);
BaselineModel load_model(const std::filesystem::path& path);

}  // namespace popscope
