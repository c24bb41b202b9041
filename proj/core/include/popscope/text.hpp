#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace popscope::text {

struct DecodedCodepoint {
  char32_t value;
  std::size_t length;  // bytes consumed, >= 1
};

/// Decodes one UTF-8 sequence at `pos`. Invalid bytes decode to U+FFFD with
/// length 1 so scanning always makes progress.
DecodedCodepoint decode_utf8(std::string_view s, std::size_t pos);

void append_utf8(std::string& out, char32_t cp);

/// Letters and digits: ASCII alphanumerics plus the Latin-1 Supplement and
/// Latin Extended-A/B letter ranges (umlauts, ß, accented letters).
bool is_word_codepoint(char32_t cp);

bool is_letter_codepoint(char32_t cp);

bool is_space(char c);

/// Lowercases ASCII, Latin-1 Supplement capitals and capital sharp s.
std::string fold_case(std::string_view s);

/// Trims and collapses every whitespace run to one ASCII space.
std::string collapse_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

/// Maximal runs of word codepoints.
std::vector<std::string_view> word_tokens(std::string_view s);

/// True when the codepoints on either side of byte offset `pos` differ in
/// word-ness. Positions outside the string count as non-word.
bool is_word_boundary(std::string_view s, std::size_t pos);

}  // namespace popscope::text
