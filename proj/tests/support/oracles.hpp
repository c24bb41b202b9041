#pragma once

// Slow, direct reimplementations used as test oracles. None of them calls
// into the library code they check.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "popscope/classifier.hpp"

namespace oracle {

/// ratings[item][coder] in {0, 1}.
using RatingMatrix = std::vector<std::vector<int>>;

struct FleissResult {
  double kappa = 0.0;
  double pct_agreement = 0.0;  // 100 x mean pairwise agreement
};

/// Fleiss' kappa by enumerating every coder pair of every item, evaluated in
/// 50-digit arithmetic.
FleissResult fleiss_by_pairs(const RatingMatrix& ratings);

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

Confusion count_naive(std::span<const double> probs, std::span<const std::uint8_t> gold,
                      double threshold);

/// F1 as an exact fraction 2tp / (2tp + fp + fn); 0/1 when tp = 0.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};
Fraction f1_fraction(const Confusion& c);
/// a < b for non-negative fractions.
bool less(const Fraction& a, const Fraction& b);
double to_double(const Fraction& f);

struct GridBest {
  double threshold = 0.0;
  Fraction f1;
};

/// Scans t = i/m for i = 1..m-1 by recounting all items at every point and
/// keeps the first strict improvement.
GridBest rescan_grid(std::span<const double> probs, std::span<const std::uint8_t> gold,
                     std::size_t m);

/// Central difference (L(w + h) - L(w - h)) / 2h of the mean BCE of `model`
/// on `batch`, with every step evaluated in 50-digit arithmetic. `offset`
/// indexes the flat weights; offsets past them address the biases.
double hp_central_difference(const popscope::BaselineModel& model,
                             std::span<const popscope::LabeledExample> batch,
                             std::size_t offset, double h);

struct TinyProblem {
  popscope::BaselineModel model;
  std::vector<popscope::LabeledExample> batch;
};

/// Random weights and biases in [-1, 1] over 2^hash_bits buckets and
/// `examples` random sparse inputs (1-4 entries, counts 1-3) with random gold.
TinyProblem random_tiny_problem(std::uint64_t seed, unsigned hash_bits, std::size_t examples);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t checked = 0;  // coordinates with |analytic| > min_abs
};

/// Compares bce_loss_and_grad against hp_central_difference on every weight
/// and bias.
GradientCheck check_gradient(const popscope::BaselineModel& model,
                             std::span<const popscope::LabeledExample> batch, double h = 1e-5,
                             double min_abs = 1e-8);

/// sigma(z) in 50-digit arithmetic, rounded to double.
double hp_sigmoid(double z);

/// Non-overlapping occurrences of `pattern` in `text`, case-insensitive for
/// ASCII and German umlauts, where the characters just outside a match are
/// not ASCII letters or digits and not part of a multibyte sequence.
std::size_t naive_phrase_count(std::string_view text, std::string_view pattern);

/// Lowercase copy with ASCII and Ä/Ö/Ü folded.
std::string naive_lower(std::string_view s);

struct PlantedSentence {
  std::string id;
  std::string text;
  popscope::LabelVector gold{};
};

/// tests/fixtures/planted_80.tsv.
std::vector<PlantedSentence> load_planted();

std::vector<popscope::LabeledExample> featurize_all(std::span<const PlantedSentence> sentences,
                                                    const popscope::FeatureConfig& config);

std::filesystem::path source_dir();

/// A fresh empty directory below the system temp dir.
std::filesystem::path fresh_dir(std::string_view name);

std::string slurp(const std::filesystem::path& path);

}  // namespace oracle
