#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "popscope/dimension.hpp"

namespace popscope {

/// Sentence-level probabilities, from the native model or an external scorer.
struct PredictionVector {
  std::string sentence_id;
  ProbVector p{};
};

/// Header: sentence_id, p_antielite, p_pplcentr, p_left, p_right; six
/// decimals.
void write_predictions_tsv(std::ostream& out, std::span<const PredictionVector> predictions);

/// Reads a predictions TSV and validates it: every probability parses and
/// lies in [0, 1], all four columns are present, ids are unique. Violations
/// raise ValidationError naming the line.
std::vector<PredictionVector> import_external_scores(std::istream& in);
std::vector<PredictionVector> import_external_scores(const std::filesystem::path& path);

/// Per-dimension decision cutoffs, each strictly inside (0, 1).
struct ThresholdSet {
  ProbVector t{0.5, 0.5, 0.5, 0.5};

  /// Throws std::invalid_argument unless every cutoff is in (0, 1).
  void validate() const;

  /// The cutoffs published with the fine-tuned transformer checkpoint.
  static ThresholdSet published() { return ThresholdSet{{0.501, 0.502, 0.422, 0.383}}; }
};

/// Thresholds as stored on disk, with the search metadata when available.
struct ThresholdFile {
  ThresholdSet thresholds;
  std::optional<double> grid_step;
  std::optional<ProbVector> f1;
};

/// JSON: {"grid_step": .., "thresholds": {"antielite": .., ...}, "f1": {..}}.
void write_thresholds_json(std::ostream& out, const ThresholdFile& file);
ThresholdFile read_thresholds_json(std::istream& in);
ThresholdFile read_thresholds_json(const std::filesystem::path& path);

/// label_d = 1 iff p_d > t_d.
LabelVector binarize(const ProbVector& p, const ThresholdSet& thresholds);
std::vector<LabelVector> binarize(std::span<const PredictionVector> predictions,
                                  const ThresholdSet& thresholds);

}  // namespace popscope
