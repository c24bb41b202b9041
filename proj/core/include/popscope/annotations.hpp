#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "popscope/corpus.hpp"
#include "popscope/dimension.hpp"

namespace popscope {

/// One coder's judgment of one sentence.
struct AnnotationRecord {
  std::string sentence_id;
  std::string coder_id;
  LabelVector labels{};
  /// (eliteless, pplmore); kept for round-trips, never used for gold labels.
  std::optional<std::array<std::uint8_t, 2>> aux_labels;
  /// Raw value of the optional "unsure" column.
  std::optional<std::string> unsure;
};

struct AnnotationSet {
  std::vector<AnnotationRecord> records;
  bool has_aux_columns = false;
  bool has_unsure_column = false;
};

/// Annotation CSV: sentence_id, coder_id, antielite, pplcentr, left, right
/// [, eliteless, pplmore] [, unsure]. Throws ValidationError on non-binary
/// labels (with line number) or duplicate (sentence_id, coder_id) pairs
/// (listing every offender).
AnnotationSet load_annotations(std::istream& in);
AnnotationSet load_annotations(const std::filesystem::path& path);
void write_annotations(std::ostream& out, const AnnotationSet& set);

struct GoldLabelRecord {
  std::string sentence_id;
  LabelVector labels{};
  std::size_t coder_count = 0;
};

/// OR rule: a dimension is gold-positive when any coder assigned it. One
/// record per sentence in first-appearance order. Throws
/// std::invalid_argument on an empty input.
std::vector<GoldLabelRecord> aggregate_gold(std::span<const AnnotationRecord> records);

/// Gold TSV: sentence_id, antielite, pplcentr, left, right.
void write_gold_tsv(std::ostream& out, std::span<const GoldLabelRecord> gold);
std::vector<GoldLabelRecord> read_gold_tsv(std::istream& in);
std::vector<GoldLabelRecord> read_gold_tsv(const std::filesystem::path& path);

/// Binary ratings of one item: how many raters said "yes" out of how many.
struct ItemVotes {
  int positive = 0;
  int raters = 0;
};

/// Fleiss' kappa for two categories. Every item must have exactly
/// `coders_per_item` ratings (>= 2), otherwise std::invalid_argument. Returns
/// 1.0 when expected agreement is 1 (all ratings identical).
double fleiss_kappa(std::span<const ItemVotes> table, int coders_per_item);

/// 100 x mean pairwise observed agreement (the P-bar of Fleiss' kappa).
double percent_agreement(std::span<const ItemVotes> table, int coders_per_item);

/// 100 x fraction of items on which all raters agree.
double unanimous_agreement(std::span<const ItemVotes> table, int coders_per_item);

struct DimensionAgreement {
  Dimension dimension{};
  std::size_t n_sentences = 0;      // items entering the statistics
  std::size_t n_positive_gold = 0;  // over all sentences
  double fleiss_kappa = 0.0;
  double pct_agreement = 0.0;
  double pct_unanimous = 0.0;
};

struct AgreementReport {
  PerDimension<DimensionAgreement> dimensions{};
  std::size_t total_sentences = 0;
  std::size_t excluded_items = 0;  // rated by a different number of coders
  int coders_per_item = 0;
  double mean_kappa = 0.0;
  double mean_pct_agreement = 0.0;
  double mean_pct_unanimous = 0.0;
};

/// Per-dimension agreement over all sentences rated by exactly
/// `coders_per_item` coders; by default the most common coder count.
AgreementReport agreement_report(std::span<const AnnotationRecord> records,
                                 std::optional<int> coders_per_item = std::nullopt);

/// CSV: label, n, fleiss_kappa, pct_agreement, pct_unanimous, n_rated; one row per
/// dimension plus a "Total / Mean" row.
void write_agreement_csv(std::ostream& out, const AgreementReport& report);

struct CooccurrenceWarning {
  std::size_t record_index = 0;
  std::string sentence_id;
  std::string coder_id;
};

/// Records with a host-ideology label but neither core dimension.
std::vector<CooccurrenceWarning> validate_ideology_cooccurrence(
    std::span<const AnnotationRecord> records);

struct GroupLabelCounts {
  int term = 0;
  std::string group;
  PerDimension<long long> labels{};
  std::array<long long, 2> aux{};  // eliteless, pplmore
};

/// Sums of positive labels over all coders per (term, group). Every
/// (term, group) present in `speeches` gets a row. Throws ValidationError on
/// a sentence_id or speech_id that does not resolve.
std::vector<GroupLabelCounts> label_counts_by_group(std::span<const AnnotationRecord> records,
                                                    std::span<const SentenceRecord> sentences,
                                                    std::span<const SpeechRecord> speeches);

void write_label_counts_csv(std::ostream& out, std::span<const GroupLabelCounts> counts);

/// Per-dimension vote tables over the sentences rated by exactly
/// `coders_per_item` coders.
PerDimension<std::vector<ItemVotes>> vote_tables(std::span<const AnnotationRecord> records,
                                                 int coders_per_item);

}  // namespace popscope
