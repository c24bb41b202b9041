#include "popscope/dictionary.hpp"

#include <istream>
#include <map>
#include <optional>
#include <regex>

#include <fmt/format.h>

#include "popscope/error.hpp"
#include "popscope/table_io.hpp"
#include "popscope/text.hpp"

namespace popscope {

struct DictionarySpec::Compiled {
  // Case-folded literal or compiled regex, parallel to patterns_.
  std::vector<std::string> literals;
  std::vector<std::optional<std::regex>> regexes;
};

DictionarySpec::DictionarySpec(std::string name, std::vector<DictionaryPattern> patterns)
    : name_(std::move(name)), patterns_(std::move(patterns)),
      compiled_(std::make_unique<Compiled>()) {
  if (patterns_.empty()) throw ValidationError(fmt::format("dictionary '{}' has no patterns", name_));
  for (const auto& p : patterns_) {
    if (p.source.empty()) throw ValidationError(fmt::format("dictionary '{}': empty pattern", name_));
    if (!p.is_regex) {
      compiled_->literals.push_back(p.case_insensitive ? text::fold_case(p.source) : p.source);
      compiled_->regexes.emplace_back();
      continue;
    }
    auto flags = std::regex::ECMAScript;
    if (p.case_insensitive) flags |= std::regex::icase;
    try {
      // icase only folds ASCII; non-ASCII capitals are folded in the pattern
      // the same way the text is.
      compiled_->regexes.emplace_back(
          std::regex(p.case_insensitive ? text::fold_case(p.source) : p.source, flags));
    } catch (const std::regex_error& e) {
      throw ValidationError(
          fmt::format("dictionary '{}': pattern '{}' does not compile: {}", name_, p.source, e.what()));
    }
    compiled_->literals.emplace_back();
  }
}

DictionarySpec::~DictionarySpec() = default;
DictionarySpec::DictionarySpec(DictionarySpec&&) noexcept = default;
DictionarySpec& DictionarySpec::operator=(DictionarySpec&&) noexcept = default;

DictionarySpec DictionarySpec::parse(std::istream& in, std::string name) {
  std::vector<DictionaryPattern> patterns;
  bool case_insensitive = true;
  std::string line;
  while (std::getline(in, line)) {
    const auto entry = text::trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    if (entry == "!case-sensitive") {
      case_insensitive = !case_insensitive;
      continue;
    }
    if (entry.rfind("re:", 0) == 0) {
      patterns.push_back({std::string(entry.substr(3)), true, case_insensitive});
    } else {
      patterns.push_back({std::string(entry), false, case_insensitive});
    }
  }
  return DictionarySpec(std::move(name), std::move(patterns));
}

DictionarySpec DictionarySpec::from_file(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return parse(in, path.stem().string());
}

std::size_t DictionarySpec::count_matches(std::size_t i, std::string_view raw) const {
  const auto& p = patterns_.at(i);
  const std::string folded = p.case_insensitive ? text::fold_case(raw) : std::string(raw);
  const std::string_view s = folded;
  std::size_t count = 0;
  if (!p.is_regex) {
    const std::string& lit = compiled_->literals[i];
    std::size_t pos = 0;
    while ((pos = s.find(lit, pos)) != std::string_view::npos) {
      if (text::is_word_boundary(s, pos) && text::is_word_boundary(s, pos + lit.size())) {
        ++count;
        pos += lit.size();
      } else {
        ++pos;
      }
    }
    return count;
  }
  const std::regex& re = *compiled_->regexes[i];
  std::size_t pos = 0;
  while (pos < s.size()) {
    const bool continuation = (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80;
    if (continuation || !text::is_word_boundary(s, pos)) {
      ++pos;
      continue;
    }
    std::cmatch m;
    auto flags = std::regex_constants::match_continuous;
    if (pos > 0) flags |= std::regex_constants::match_prev_avail;
    if (std::regex_search(s.data() + pos, s.data() + s.size(), m, re, flags) &&
        m.length(0) > 0 &&
        text::is_word_boundary(s, pos + static_cast<std::size_t>(m.length(0)))) {
      ++count;
      pos += static_cast<std::size_t>(m.length(0));
    } else {
      ++pos;
    }
  }
  return count;
}

DictMatch dict_score(std::string_view sentence_text, const DictionarySpec& spec) {
  DictMatch result;
  for (std::size_t i = 0; i < spec.patterns().size(); ++i) {
    const std::size_t n = spec.count_matches(i, sentence_text);
    if (n == 0) continue;
    result.match_count += n;
    result.matched_patterns.push_back(spec.patterns()[i].source);
  }
  result.score = result.match_count > 0 ? 1 : 0;
  return result;
}

std::vector<GroupTermMean> dict_party_profile(std::span<const DictionarySentence> sentences,
                                              const DictionarySpec& spec) {
  std::map<std::pair<int, std::string>, std::pair<std::size_t, std::size_t>> acc;
  for (const auto& s : sentences) {
    auto& [hits, n] = acc[{s.term, s.group}];
    hits += static_cast<std::size_t>(dict_score(s.text, spec).score);
    ++n;
  }
  std::vector<GroupTermMean> out;
  out.reserve(acc.size());
  for (const auto& [key, v] : acc) {
    out.push_back({key.first, key.second,
                   static_cast<double>(v.first) / static_cast<double>(v.second), v.second});
  }
  return out;
}

}  // namespace popscope
