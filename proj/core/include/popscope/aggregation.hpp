#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "popscope/corpus.hpp"
#include "popscope/dictionary.hpp"
#include "popscope/dimension.hpp"
#include "popscope/predictions.hpp"

namespace popscope {

/// Percentage of sentences with p_d > t_d, per dimension. Throws
/// std::invalid_argument on an empty input.
ProbVector prevalence(std::span<const PredictionVector> predictions,
                      const ThresholdSet& thresholds);

enum class Level { Speech, Politician, Party };

std::string_view level_name(Level level);
std::optional<Level> parse_level(std::string_view name);

/// Speech: speech_id. Politician: "First Last (Group)". Party: group.
std::string unit_key(const SpeechRecord& speech, Level level);

struct AggregateScore {
  Level level = Level::Party;
  std::string key;
  int term = 0;
  ProbVector means{};
  std::size_t n_sentences = 0;
};

struct AggregateResult {
  std::vector<AggregateScore> scores;  // ordered by (term, key)
  std::size_t excluded_speeches = 0;   // fewer than min_sentences sentences
  std::size_t sentences_without_prediction = 0;
};

/// Means of raw probabilities over all sentences of each unit within a term,
/// pooled across the unit's speeches. Speeches with fewer than
/// `min_sentences` sentences in the sentence table are dropped first.
/// Predictions for unknown sentences, or sentences of unknown speeches, raise
/// ValidationError listing the ids. Throws std::invalid_argument if
/// min_sentences is 0.
AggregateResult unit_means(std::span<const PredictionVector> predictions,
                           std::span<const SentenceRecord> sentences,
                           std::span<const SpeechRecord> speeches, Level level,
                           std::size_t min_sentences = 4);

/// means[AntiElitism] * means[PeopleCentrism].
double populism_index(const ProbVector& means);
inline double populism_index(const AggregateScore& score) { return populism_index(score.means); }

struct RankEntry {
  std::string key;
  int term = 0;
  double value = 0.0;
};

/// Per term (ascending), the `top_n` entries by descending value, ties by
/// key; top_n = 0 keeps every entry.
std::vector<RankEntry> rank_units(std::span<const RankEntry> entries, std::size_t top_n);

struct Normalized {
  std::vector<double> values;
  bool normalized = true;  // false when the maximum was not positive
};

/// Divides every value by the maximum. If the maximum is not positive the
/// values are returned unchanged with normalized = false.
Normalized normalize_max(std::span<const double> values);

/// Product-moment correlation. Throws std::invalid_argument for mismatched
/// lengths or fewer than 2 pairs, and UndefinedResultError naming the side
/// ("xs" or "ys") that has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct ExpertSurveyRow {
  std::string party;
  double antielite_salience = 0.0;
  double people_vs_elite = 0.0;
  int year = 0;
};

/// CSV with columns party, antielite_salience, people_vs_elite, year.
std::vector<ExpertSurveyRow> read_survey_csv(std::istream& in);
std::vector<ExpertSurveyRow> read_survey_csv(const std::filesystem::path& path);

/// CSV with columns group, party mapping corpus groups to survey names.
std::map<std::string, std::string> read_party_map_csv(const std::filesystem::path& path);

struct MatchedParty {
  std::string group;
  std::string party;
  double antielite_mean = 0.0;
  double pplcentr_mean = 0.0;
  double antielite_salience = 0.0;
  double people_vs_elite = 0.0;
};

struct SurveyCorrelation {
  double r_antielite = 0.0;
  double r_pplcentr = 0.0;
  std::vector<MatchedParty> matched;  // ordered by group
  std::vector<std::string> unmatched_groups;
  std::vector<std::string> unmatched_survey;
};

/// Joins party-level means to survey rows by name (through `mapping` when a
/// group is listed there, else by identical name) and correlates
/// anti-elitism with antielite_salience and people-centrism with
/// people_vs_elite. Throws ValidationError with fewer than 2 matches.
SurveyCorrelation correlate_survey(std::span<const AggregateScore> party_means,
                                   std::span<const ExpertSurveyRow> survey,
                                   const std::map<std::string, std::string>& mapping = {});

struct CoreFlags {
  double rate = 0.0;
  std::vector<std::string> flagged;
};

/// Flags sentences with p > t on anti-elitism or people-centrism.
CoreFlags any_core_rate(std::span<const PredictionVector> predictions,
                        const ThresholdSet& thresholds);

/// Columns level, key, term, n_sentences, antielite, pplcentr, left, right,
/// index; eight decimals.
void write_aggregates_csv(std::ostream& out, std::span<const AggregateScore> scores);
std::vector<AggregateScore> read_aggregates_csv(std::istream& in);
std::vector<AggregateScore> read_aggregates_csv(const std::filesystem::path& path);

/// Tidy figure data: one value per (term, group, dimension) with the value
/// divided by the per-(term, dimension) maximum across groups.
struct FigureRow {
  int term = 0;
  std::string group;
  std::string dimension;
  double value = 0.0;
  double normalized_value = 0.0;
};

struct FigureData {
  std::vector<FigureRow> rows;
  std::vector<std::string> warnings;
};

/// Party means for the four dimensions.
FigureData party_profile_figure(std::span<const AggregateScore> party_scores);
/// Mean of the speech-level populism index per (term, group).
FigureData party_index_figure(std::span<const AggregateScore> speech_scores,
                              std::span<const SpeechRecord> speeches);
/// Dictionary means per (term, group), dimension "dictionary".
FigureData dictionary_figure(std::span<const GroupTermMean> means);

void write_figure_csv(std::ostream& out, std::span<const FigureRow> rows);

/// Out-of-sample statements: TSV with id, text, expected_dimensions (comma
/// separated column names, may be empty) and source.
struct OosStatement {
  std::string id;
  std::string text;
  std::vector<Dimension> expected;
  std::string source;
};

std::vector<OosStatement> read_oos_fixture(std::istream& in);
std::vector<OosStatement> read_oos_fixture(const std::filesystem::path& path);

}  // namespace popscope
