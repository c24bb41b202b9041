#include <gtest/gtest.h>

#include "popscope/dimension.hpp"
#include "popscope/text.hpp"

using namespace popscope;

TEST(Text, DecodesMultibyteAndRecoversFromInvalidBytes) {
  const std::string s = "\xC3\xA4x\xFF";
  auto a = text::decode_utf8(s, 0);
  EXPECT_EQ(a.value, U'ä');
  EXPECT_EQ(a.length, 2u);
  auto bad = text::decode_utf8(s, 3);
  EXPECT_EQ(bad.value, U'�');
  EXPECT_EQ(bad.length, 1u);
}

TEST(Text, AppendRoundTrips) {
  for (char32_t cp : {U'a', U'ß', U'€', U'\U0001F600'}) {
    std::string s;
    text::append_utf8(s, cp);
    EXPECT_EQ(text::decode_utf8(s, 0).value, cp);
    EXPECT_EQ(text::decode_utf8(s, 0).length, s.size());
  }
}

TEST(Text, FoldCaseHandlesUmlautsAndCapitalSharpS) {
  EXPECT_EQ(text::fold_case("\xC3\x84RGER \xC3\x9C" "BER Stra\xE1\xBA\x9E" "E"),
            "\xC3\xA4rger \xC3\xBC" "ber stra\xC3\x9F" "e");
  EXPECT_EQ(text::fold_case("ABC-123"), "abc-123");
}

TEST(Text, CollapseWhitespace) {
  EXPECT_EQ(text::collapse_whitespace("  a\t\tb \n c  "), "a b c");
  EXPECT_EQ(text::collapse_whitespace(" \n "), "");
}

TEST(Text, WordTokensKeepUmlautsTogether) {
  const auto tokens = text::word_tokens("Die Bürger, 2019 – überall!");
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[0], "Die");
  EXPECT_EQ(tokens[1], "Bürger");
  EXPECT_EQ(tokens[2], "2019");
  EXPECT_EQ(tokens[3], "überall");
}

TEST(Text, WordBoundary) {
  const std::string s = "ab cd";
  EXPECT_TRUE(text::is_word_boundary(s, 0));
  EXPECT_FALSE(text::is_word_boundary(s, 1));
  EXPECT_TRUE(text::is_word_boundary(s, 2));
  EXPECT_TRUE(text::is_word_boundary(s, 5));
}

TEST(Dimension, ParsesEveryNameForm) {
  for (Dimension d : kDimensions) {
    EXPECT_EQ(parse_dimension(column_name(d)), d);
    EXPECT_EQ(parse_dimension(display_name(d)), d);
  }
  EXPECT_EQ(parse_dimension("RightWing"), Dimension::RightWing);
  EXPECT_FALSE(parse_dimension("populism").has_value());
}
