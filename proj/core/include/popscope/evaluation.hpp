#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "popscope/annotations.hpp"
#include "popscope/classifier.hpp"
#include "popscope/dimension.hpp"
#include "popscope/predictions.hpp"
#include "popscope/training.hpp"

namespace popscope {

struct SplitSpec {
  std::array<double, 3> ratios{0.6, 0.2, 0.2};  // train, validation, test
  std::uint64_t seed = 0;
  std::vector<Dimension> stratify_on;
};

/// Sorted item indices of each part.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Part sizes by largest remainder: floor(n * r_i) plus one for the parts
/// with the largest fractional remainders (earlier parts first on ties), so
/// every size is within 1 of n * r_i and the sizes sum to n.
std::vector<std::size_t> partition_sizes(std::size_t n, std::span<const double> ratios);

/// Random partition of labels.size() items. With stratify_on set, items are
/// grouped by their label pattern on those dimensions and each group is
/// spread over the parts in proportion to the part sizes. Throws
/// std::invalid_argument for fewer than 3 items, a non-positive ratio, or
/// ratios not summing to 1 within 1e-9.
SplitIndices split(std::span<const LabelVector> labels, const SplitSpec& spec);
SplitIndices split(std::size_t n, const SplitSpec& spec);

/// Two-way random split keeping `fraction` of the items in the second part;
/// stratified on every dimension. Used to carve validation slices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> holdout(
    std::span<const LabelVector> labels, double fraction, std::uint64_t seed);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Shuffles the indices and cuts them into k contiguous test folds; the
/// first n % k folds hold one extra item. Throws std::invalid_argument for
/// k < 2 or k > n.
std::vector<Fold> kfold(std::size_t n, std::size_t k, std::uint64_t seed);

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  friend bool operator==(const Counts&, const Counts&) = default;
  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  friend bool operator==(const Prf&, const Prf&) = default;
};

/// Precision, recall and F1; each is 0 when its denominator is 0.
Prf prf(std::size_t tp, std::size_t fp, std::size_t fn);
inline Prf prf(const Counts& c) { return prf(c.tp, c.fp, c.fn); }

struct MicroMacro {
  Prf micro;  // prf over summed counts
  Prf macro;  // unweighted mean of the per-dimension values
};

MicroMacro micro_macro(const PerDimension<Counts>& counts);

PerDimension<Counts> confusion(std::span<const LabelVector> predicted,
                               std::span<const LabelVector> gold);

struct MetricsReport {
  PerDimension<Counts> counts{};
  PerDimension<Prf> per_dimension{};
  MicroMacro averages;
};

MetricsReport metrics_from_counts(const PerDimension<Counts>& counts);

/// Binarizes with the thresholds and scores against gold.
MetricsReport evaluate(std::span<const ProbVector> probs, std::span<const LabelVector> gold,
                       const ThresholdSet& thresholds);

/// Pairs predictions with gold labels by sentence id, in prediction order.
/// Gold sentences without a prediction are an error; predictions without
/// gold are dropped and counted.
struct AlignedEval {
  std::vector<std::string> ids;
  std::vector<ProbVector> probs;
  std::vector<LabelVector> gold;
  std::size_t unlabeled_predictions = 0;
};
AlignedEval align_with_gold(std::span<const PredictionVector> predictions,
                            std::span<const GoldLabelRecord> gold);

/// The scan grid: t_i = i / m for i = 1 .. m-1 when 1 / grid_step is the
/// integer m (within 1e-9), otherwise i * grid_step up to 1 - grid_step.
/// Throws std::invalid_argument unless 0 < grid_step <= 0.1.
std::vector<double> threshold_grid(double grid_step);

struct ThresholdSearch {
  double threshold = 0.0;
  double f1 = 0.0;
  bool no_positives = false;  // gold had no positives; threshold is the top grid point
};

/// Smallest grid threshold maximizing F1 under strict binarization.
ThresholdSearch search_threshold(std::span<const double> probs, std::span<const std::uint8_t> gold,
                                 double grid_step = 0.001);

struct Calibration {
  ThresholdFile file;
  std::vector<std::string> warnings;
};

/// Per-dimension threshold search.
Calibration calibrate(std::span<const ProbVector> probs, std::span<const LabelVector> gold,
                      double grid_step = 0.001);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
};

struct FoldResult {
  std::size_t fold = 0;
  std::size_t n_train = 0, n_validation = 0, n_test = 0;
  ThresholdSet thresholds;
  MetricsReport metrics;
};

struct CvReport {
  std::size_t k = 0;
  double grid_step = 0.001;
  std::vector<FoldResult> folds;
  PerDimension<std::array<MeanStd, 3>> per_dimension{};  // precision, recall, f1
  std::array<MeanStd, 3> micro{};
  std::array<MeanStd, 3> macro{};
  MetricsReport pooled;  // from counts summed over test folds
  std::vector<std::string> warnings;
};

/// k-fold cross-validation of the native baseline. In each fold 20% of the
/// training part (stratified, seeded from the fold index) selects the
/// thresholds, the model trains on the rest, and the test fold is scored.
/// Folds run on up to `jobs` threads with identical results for any count.
CvReport evaluate_cv(std::span<const LabeledExample> dataset, std::size_t k,
                     const TrainConfig& config, double grid_step = 0.001, unsigned jobs = 1);

/// CSV rows: the four dimensions, "micro avg" and "macro avg"; columns
/// dimension, precision, precision_std, recall, recall_std, f1, f1_std,
/// tp, fp, fn, tn. Standard deviations are empty for single evaluations.
void write_metrics_csv(std::ostream& out, const MetricsReport& report);
void write_metrics_csv(std::ostream& out, const CvReport& report);
void write_metrics_json(std::ostream& out, const MetricsReport& report);
void write_metrics_json(std::ostream& out, const CvReport& report);

MeanStd mean_std(std::span<const double> values);

}  // namespace popscope
