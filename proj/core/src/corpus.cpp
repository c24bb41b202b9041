#include "popscope/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "popscope/error.hpp"
#include "popscope/table_io.hpp"
#include "popscope/text.hpp"

namespace popscope {

namespace detail {
extern const std::string_view kBuiltinAbbreviations;
}

namespace {

std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view s) {
  // Accepts YYYY-MM-DD, optionally followed by a time part ("T..." or " ...").
  if (s.size() > 10 && (s[10] == 'T' || s[10] == ' ')) s = s.substr(0, 10);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = io::parse_int(s.substr(0, 4));
  const auto m = io::parse_int(s.substr(5, 2));
  const auto d = io::parse_int(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day date{
      std::chrono::year{static_cast<int>(*y)},
      std::chrono::month{static_cast<unsigned>(*m)},
      std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

// Raw field values of one input row, before validation.
struct RawSpeech {
  std::string speech_id;
  std::string term;
  std::string date;
  std::string speaker_first;
  std::string speaker_last;
  std::string group;
  std::string text;
};

class SpeechCollector {
 public:
  void add(std::size_t line, const RawSpeech& raw) {
    ++result_.report.rows_read;
    auto fail = [&](std::string message) {
      result_.report.malformed.push_back({line, std::move(message)});
    };
    const std::string id(text::trim(raw.speech_id));
    if (id.empty()) return fail("empty speech_id");
    const auto term = io::parse_int(raw.term);
    if (!term || *term <= 0) return fail(fmt::format("invalid term '{}'", raw.term));
    const auto date = parse_iso_date(text::trim(raw.date));
    if (!date) return fail(fmt::format("invalid date '{}'", raw.date));
    if (text::trim(raw.text).empty()) {
      ++result_.report.dropped_empty_text;
      return;
    }
    const std::string group(text::trim(raw.group));
    if (group.empty()) {
      ++result_.report.dropped_missing_group;
      return;
    }
    if (!ids_.insert(id).second) return fail(fmt::format("duplicate speech_id '{}'", id));
    result_.speeches.push_back(SpeechRecord{
        id, static_cast<int>(*term), *date, std::string(text::trim(raw.speaker_first)),
        std::string(text::trim(raw.speaker_last)), group, raw.text});
    ++result_.report.kept;
  }

  void malformed(std::size_t line, std::string message) {
    ++result_.report.rows_read;
    result_.report.malformed.push_back({line, std::move(message)});
  }

  IngestResult take() { return std::move(result_); }

 private:
  IngestResult result_;
  std::unordered_set<std::string> ids_;
};

std::string json_scalar(const nlohmann::json& obj, const char* key, bool& ok) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  ok = false;
  return {};
}

}  // namespace

IngestResult ingest_speeches_jsonl(std::istream& in) {
  SpeechCollector collector;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      collector.malformed(line_no, fmt::format("invalid JSON: {}", e.what()));
      continue;
    }
    if (!obj.is_object()) {
      collector.malformed(line_no, "row is not a JSON object");
      continue;
    }
    bool ok = true;
    RawSpeech raw{json_scalar(obj, "speech_id", ok),     json_scalar(obj, "term", ok),
                  json_scalar(obj, "date", ok),          json_scalar(obj, "speaker_first", ok),
                  json_scalar(obj, "speaker_last", ok),  json_scalar(obj, "group", ok),
                  json_scalar(obj, "text", ok)};
    if (!ok) {
      collector.malformed(line_no, "field with unsupported JSON type");
      continue;
    }
    collector.add(line_no, raw);
  }
  if (in.bad()) throw IoError("read error while ingesting speeches");
  return collector.take();
}

IngestResult ingest_speeches_csv(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Csv);
  const char* context = "corpus CSV";
  const std::size_t c_id = table.require_column("speech_id", context);
  const std::size_t c_term = table.require_column("term", context);
  const std::size_t c_date = table.require_column("date", context);
  const std::size_t c_first = table.require_column("speaker_first", context);
  const std::size_t c_last = table.require_column("speaker_last", context);
  const std::size_t c_group = table.require_column("group", context);
  const std::size_t c_text = table.require_column("text", context);
  SpeechCollector collector;
  for (const auto& row : table.rows) {
    const auto& f = row.fields;
    collector.add(row.line, RawSpeech{f[c_id], f[c_term], f[c_date], f[c_first],
                                      f[c_last], f[c_group], f[c_text]});
  }
  return collector.take();
}

IngestResult ingest_speeches(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  if (path.extension() == ".csv") return ingest_speeches_csv(in);
  return ingest_speeches_jsonl(in);
}

std::string format_date(std::chrono::year_month_day date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()),
                     static_cast<unsigned>(date.day()));
}

void write_speeches_jsonl(std::ostream& out, std::span<const SpeechRecord> speeches) {
  for (const auto& s : speeches) {
    nlohmann::ordered_json obj;
    obj["speech_id"] = s.speech_id;
    obj["term"] = s.term;
    obj["date"] = format_date(s.date);
    obj["speaker_first"] = s.speaker_first;
    obj["speaker_last"] = s.speaker_last;
    obj["group"] = s.group;
    obj["text"] = s.text;
    out << obj.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Abbreviations

AbbreviationList::AbbreviationList(std::vector<std::string> entries) {
  for (auto& e : entries) {
    std::string normalized = text::fold_case(text::collapse_whitespace(e));
    if (normalized.empty()) continue;
    if (normalized.back() != '.') normalized.push_back('.');
    entries_.push_back(std::move(normalized));
  }
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

AbbreviationList AbbreviationList::parse(std::istream& in) {
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto entry = text::trim(line);
    if (!entry.empty()) entries.emplace_back(entry);
  }
  return AbbreviationList(std::move(entries));
}

AbbreviationList AbbreviationList::from_file(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return parse(in);
}

const AbbreviationList& AbbreviationList::builtin() {
  static const AbbreviationList list = [] {
    std::istringstream in{std::string(detail::kBuiltinAbbreviations)};
    return parse(in);
  }();
  return list;
}

bool AbbreviationList::ends_at(std::string_view text, std::size_t dot) const {
  const std::size_t end = dot + 1;
  for (const auto& entry : entries_) {
    if (entry.size() > end) continue;
    const std::size_t start = end - entry.size();
    if (!text::is_word_boundary(text, start) && start != 0) continue;
    if (text::fold_case(text.substr(start, entry.size())) == entry) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Segmentation

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Closing quotes and brackets that may follow a terminator.
std::size_t closer_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  const auto [cp, len] = text::decode_utf8(s, pos);
  switch (cp) {
    case 0x201C:  // “
    case 0x201D:  // ”
    case 0x2018:  // ‘
    case 0x2019:  // ’
    case 0x00BB:  // »
    case 0x00AB:  // «
    case 0x203A:  // ›
    case 0x2039:  // ‹
      return len;
    default:
      return 0;
  }
}

// Start of the whitespace-delimited token that ends right before `pos`.
std::size_t token_start(std::string_view s, std::size_t pos) {
  while (pos > 0 && !text::is_space(s[pos - 1])) --pos;
  return pos;
}

}  // namespace

SentenceSegmenter::SentenceSegmenter(AbbreviationList abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

bool SentenceSegmenter::suppresses_split(std::string_view text, std::size_t dot) const {
  if (abbreviations_.ends_at(text, dot)) return true;
  // The word directly before the period, after any opening punctuation.
  std::size_t start = token_start(text, dot);
  while (start < dot) {
    const auto d = text::decode_utf8(text, start);
    if (text::is_word_codepoint(d.value)) break;
    start += d.length;
  }
  const std::string_view word = text.substr(start, dot - start);
  if (word.empty()) return false;
  if (word.size() <= 3 &&
      std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return true;  // ordinal
  }
  const auto first = text::decode_utf8(word, 0);
  return first.length == word.size() && text::is_letter_codepoint(first.value);
}

std::vector<std::string> SentenceSegmenter::split(std::string_view raw) const {
  const std::string s = text::collapse_whitespace(raw);
  std::vector<std::string> sentences;
  std::size_t begin = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (!is_terminator(s[pos])) {
      ++pos;
      continue;
    }
    const std::size_t run_begin = pos;
    while (pos < s.size() && is_terminator(s[pos])) ++pos;
    const std::size_t run_end = pos;
    while (pos < s.size()) {
      const std::size_t n = closer_length(s, pos);
      if (n == 0) break;
      pos += n;
    }
    if (pos >= s.size() || s[pos] != ' ') continue;
    if (run_end - run_begin == 1 && s[run_begin] == '.' &&
        suppresses_split(s, run_begin)) {
      continue;
    }
    sentences.emplace_back(s.substr(begin, pos - begin));
    begin = pos + 1;
    pos = begin;
  }
  if (begin < s.size()) sentences.emplace_back(s.substr(begin));
  return sentences;
}

std::vector<SentenceRecord> SentenceSegmenter::segment(const SpeechRecord& speech) const {
  std::vector<SentenceRecord> out;
  auto parts = split(speech.text);
  out.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out.push_back(SentenceRecord{fmt::format("{}:{}", speech.speech_id, i),
                                 speech.speech_id, i, std::move(parts[i])});
  }
  return out;
}

std::vector<SentenceRecord> segment_sentences(const SpeechRecord& speech,
                                              const SentenceSegmenter& segmenter) {
  return segmenter.segment(speech);
}

namespace {

// Groups sentences by speech in first-appearance order, each group sorted by
// position.
std::vector<std::vector<SentenceRecord>> group_by_speech(std::vector<SentenceRecord> sentences) {
  std::vector<std::vector<SentenceRecord>> groups;
  std::unordered_map<std::string, std::size_t> slot;
  for (auto& s : sentences) {
    auto [it, inserted] = slot.try_emplace(s.speech_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(std::move(s));
  }
  for (auto& g : groups) {
    std::stable_sort(g.begin(), g.end(), [](const auto& a, const auto& b) {
      return a.position < b.position;
    });
  }
  return groups;
}

}  // namespace

std::vector<SentenceRecord> drop_initial_sentences(std::vector<SentenceRecord> sentences) {
  std::vector<SentenceRecord> out;
  for (auto& group : group_by_speech(std::move(sentences))) {
    for (std::size_t i = 1; i < group.size(); ++i) {
      group[i].position = i - 1;
      out.push_back(std::move(group[i]));
    }
  }
  return out;
}

std::vector<SentenceRecord> filter_min_length(std::vector<SentenceRecord> sentences,
                                              std::size_t min_sentences) {
  if (min_sentences < 1) throw std::invalid_argument("min_sentences must be at least 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : sentences) ++counts[s.speech_id];
  std::vector<SentenceRecord> out;
  out.reserve(sentences.size());
  for (auto& s : sentences) {
    if (counts[s.speech_id] >= min_sentences) out.push_back(std::move(s));
  }
  return out;
}

void write_sentences_tsv(std::ostream& out, std::span<const SentenceRecord> sentences) {
  out << "sentence_id\tspeech_id\tposition\ttext\n";
  for (const auto& s : sentences) {
    out << io::tsv_field(s.sentence_id) << '\t' << io::tsv_field(s.speech_id) << '\t'
        << s.position << '\t' << io::tsv_field(s.text) << '\n';
  }
}

std::vector<SentenceRecord> read_sentences_tsv(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Tsv);
  const char* context = "sentences TSV";
  const std::size_t c_sid = table.require_column("sentence_id", context);
  const std::size_t c_speech = table.require_column("speech_id", context);
  const std::size_t c_pos = table.require_column("position", context);
  const std::size_t c_text = table.require_column("text", context);
  std::vector<SentenceRecord> out;
  out.reserve(table.rows.size());
  std::unordered_set<std::string> ids;
  for (const auto& row : table.rows) {
    const auto pos = io::parse_int(row.fields[c_pos]);
    if (!pos || *pos < 0) {
      throw ValidationError(
          fmt::format("line {}: invalid position '{}'", row.line, row.fields[c_pos]));
    }
    if (!ids.insert(row.fields[c_sid]).second) {
      throw ValidationError(
          fmt::format("line {}: duplicate sentence_id '{}'", row.line, row.fields[c_sid]));
    }
    out.push_back(SentenceRecord{row.fields[c_sid], row.fields[c_speech],
                                 static_cast<std::size_t>(*pos), row.fields[c_text]});
  }
  return out;
}

std::vector<SentenceRecord> read_sentences_tsv(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  try {
    return read_sentences_tsv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace popscope
