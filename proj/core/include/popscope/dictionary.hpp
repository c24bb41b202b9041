#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace popscope {

/// One dictionary entry: a literal phrase or a regular expression (ECMAScript
/// syntax). Matches must start and end on word boundaries. Expressions run
/// over UTF-8 bytes, so \w and ranges cover ASCII only; list umlauts in a
/// class explicitly ("[a-zäöüß]").
struct DictionaryPattern {
  std::string source;
  bool is_regex = false;
  bool case_insensitive = true;
};

/// A compiled pattern dictionary.
///
/// File format: one pattern per line; "re:" prefixes a regular expression,
/// anything else is a literal; "#" starts a comment line; a line reading
/// "!case-sensitive" toggles case sensitivity for the patterns after it.
class DictionarySpec {
 public:
  /// Throws ValidationError if the list is empty or a regex fails to compile.
  DictionarySpec(std::string name, std::vector<DictionaryPattern> patterns);
  ~DictionarySpec();
  DictionarySpec(DictionarySpec&&) noexcept;
  DictionarySpec& operator=(DictionarySpec&&) noexcept;

  static DictionarySpec parse(std::istream& in, std::string name);
  static DictionarySpec from_file(const std::filesystem::path& path);

  const std::string& name() const { return name_; }
  const std::vector<DictionaryPattern>& patterns() const { return patterns_; }

  /// Non-overlapping, boundary-anchored occurrences of pattern `i` in `text`.
  std::size_t count_matches(std::size_t i, std::string_view text) const;

 private:
  struct Compiled;

  std::string name_;
  std::vector<DictionaryPattern> patterns_;
  std::unique_ptr<Compiled> compiled_;
};

struct DictMatch {
  int score = 0;  // 1 iff match_count >= 1
  std::size_t match_count = 0;
  std::vector<std::string> matched_patterns;
};

DictMatch dict_score(std::string_view sentence_text, const DictionarySpec& spec);

struct DictionarySentence {
  int term = 0;
  std::string group;
  std::string text;
};

struct GroupTermMean {
  int term = 0;
  std::string group;
  double mean = 0.0;
  std::size_t n_sentences = 0;
};

/// Mean binary score per (term, group), ordered by (term, group).
std::vector<GroupTermMean> dict_party_profile(std::span<const DictionarySentence> sentences,
                                              const DictionarySpec& spec);

}  // namespace popscope
