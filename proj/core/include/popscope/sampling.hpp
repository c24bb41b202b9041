#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "popscope/dimension.hpp"
#include "popscope/predictions.hpp"

namespace popscope {

/// One (group, dictionary score) cell of the initial stratified round.
struct CellReport {
  std::string group;
  int score = 0;
  std::size_t available = 0;
  std::size_t target = 0;  // equal share before leftover redistribution
  std::size_t selected = 0;
  std::size_t shortfall() const { return selected < target ? target - selected : 0; }
};

/// Parameters of an active-learning round.
struct ActiveReport {
  double edge_fraction = 0.5;
  std::size_t pool_size = 0;
  std::size_t edge_selected = 0;
  std::size_t rarity_selected = 0;
  Dimension rarity_dimension = Dimension::AntiElitism;
};

struct SamplePlan {
  int round = 0;  // 0 is the stratified initial round
  std::size_t size = 0;
  std::uint64_t seed = 0;
  std::vector<CellReport> strata;
  std::optional<ActiveReport> active;
  std::vector<std::string> selection;
};

struct StratumItem {
  std::string sentence_id;
  std::string group;
  int dict_score = 0;  // 0 or 1
};

/// Samples without replacement within each (group, score) cell. Every cell
/// targets size / (groups * 2) sentences (rounded down); leftover capacity
/// goes round-robin, one at a time, to cells that still have sentences, in
/// lexicographic cell order. Cells are listed in that order in the report.
/// Throws std::invalid_argument for size 0, size above the corpus size,
/// scores other than 0/1 or duplicate ids.
SamplePlan stratified_sample(std::span<const StratumItem> items, std::size_t size,
                             std::uint64_t seed);

/// Picks floor(size * edge_fraction) sentences with the smallest ambiguity
/// min_d |p_d - t_d|, then fills the rest with the highest-probability
/// sentences for the dimension with the fewest gold positives (first in
/// Dimension order on ties). Labeled ids are excluded; ties are broken by
/// sentence id. If the pool is smaller than `size`, the whole pool is
/// returned. Throws std::invalid_argument on an empty pool or an
/// edge_fraction outside [0, 1].
SamplePlan active_sample(std::span<const PredictionVector> predictions,
                         const ThresholdSet& thresholds, const std::set<std::string>& labeled,
                         const PerDimension<std::size_t>& gold_counts, std::size_t size,
                         std::uint64_t seed, double edge_fraction = 0.5, int round = 1);

double ambiguity(const ProbVector& p, const ThresholdSet& thresholds);

void write_sample_plan_json(std::ostream& out, const SamplePlan& plan);

struct BandSpec {
  Dimension dimension = Dimension::AntiElitism;
  double center = 0.5;
  double half_width = 0.15;

  /// Throws std::invalid_argument unless 0 < center < 1 and half_width > 0.
  void validate() const;
};

/// Below / inside / above the closed interval [center - w, center + w].
/// Boundary comparisons allow 1e-9 of floating-point slack, so a value
/// written as the exact decimal boundary is inside.
struct BandGroups {
  std::vector<std::string> below;
  std::vector<std::string> edge;
  std::vector<std::string> above;
};

BandGroups extract_band(std::span<const PredictionVector> predictions, const BandSpec& spec);

}  // namespace popscope
