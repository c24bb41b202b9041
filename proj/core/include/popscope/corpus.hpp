#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace popscope {

/// All verbal acts of one speaker in one session.
struct SpeechRecord {
  std::string speech_id;
  int term = 0;
  std::chrono::year_month_day date{};
  std::string speaker_first;
  std::string speaker_last;
  std::string group;
  std::string text;
};

struct SentenceRecord {
  std::string sentence_id;  // "<speech_id>:<position at segmentation>"
  std::string speech_id;
  std::size_t position = 0;
  std::string text;
};

struct IngestIssue {
  std::size_t line = 0;
  std::string message;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t kept = 0;
  std::size_t dropped_empty_text = 0;
  std::size_t dropped_missing_group = 0;
  std::vector<IngestIssue> malformed;

  std::size_t dropped() const {
    return dropped_empty_text + dropped_missing_group + malformed.size();
  }
};

struct IngestResult {
  std::vector<SpeechRecord> speeches;
  IngestReport report;
};

/// JSONL: one object per line with keys speech_id, term, date, speaker_first,
/// speaker_last, group, text. Rows with empty text or group are dropped and
/// counted; malformed rows (bad JSON, bad types, bad date, duplicate id) are
/// recorded with their line number.
IngestResult ingest_speeches_jsonl(std::istream& in);
/// CSV with the same header names.
IngestResult ingest_speeches_csv(std::istream& in);
/// Dispatches on the extension (.csv → CSV, anything else → JSONL). Throws
/// IoError naming the path when the source cannot be read.
IngestResult ingest_speeches(const std::filesystem::path& path);

void write_speeches_jsonl(std::ostream& out, std::span<const SpeechRecord> speeches);
std::string format_date(std::chrono::year_month_day date);

/// Curated abbreviations that end in "." but do not end a sentence.
///
/// File format: one abbreviation per line (e.g. "Dr." or "z. B."), "#" starts
/// a comment. Matching is case-insensitive.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::vector<std::string> entries);

  static AbbreviationList parse(std::istream& in);
  static AbbreviationList from_file(const std::filesystem::path& path);
  /// The German list shipped in data/abbreviations_de.txt.
  static const AbbreviationList& builtin();

  /// True when an entry ends exactly at `text[dot]` (the period) and starts
  /// at a word boundary.
  bool ends_at(std::string_view text, std::size_t dot) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::string> entries_;  // whitespace-collapsed, case-folded
};

/// Rule-based sentence splitter.
///
/// A run of terminators (".", "!", "?"), optionally followed by closing
/// quotes or brackets, ends a sentence when it is followed by whitespace. A
/// run that is a single "." does not end a sentence when it closes an
/// abbreviation from the list, a single letter ("z.", "B."), or an ordinal
/// of one to three digits ("19."). Decimal points and other interior dots
/// never split because they are not followed by whitespace.
class SentenceSegmenter {
 public:
  explicit SentenceSegmenter(AbbreviationList abbreviations = AbbreviationList::builtin());

  /// Splits whitespace-collapsed `text`; returns at least one sentence for
  /// non-blank input.
  std::vector<std::string> split(std::string_view text) const;

  std::vector<SentenceRecord> segment(const SpeechRecord& speech) const;

 private:
  bool suppresses_split(std::string_view text, std::size_t dot) const;

  AbbreviationList abbreviations_;
};

std::vector<SentenceRecord> segment_sentences(const SpeechRecord& speech,
                                              const SentenceSegmenter& segmenter);

/// Removes each speech's first sentence and re-indexes the rest from 0.
/// Speeches left without sentences disappear. Speech order (first appearance)
/// and sentence ids are preserved.
std::vector<SentenceRecord> drop_initial_sentences(std::vector<SentenceRecord> sentences);

/// Keeps speeches with at least `min_sentences` sentences. Throws
/// std::invalid_argument when min_sentences < 1.
std::vector<SentenceRecord> filter_min_length(std::vector<SentenceRecord> sentences,
                                              std::size_t min_sentences);

/// TSV with header sentence_id, speech_id, position, text.
void write_sentences_tsv(std::ostream& out, std::span<const SentenceRecord> sentences);
std::vector<SentenceRecord> read_sentences_tsv(std::istream& in);
std::vector<SentenceRecord> read_sentences_tsv(const std::filesystem::path& path);

}  // namespace popscope
