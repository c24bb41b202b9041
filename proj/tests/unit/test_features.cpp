#include <gtest/gtest.h>

#include <map>

#include "popscope/features.hpp"

using namespace popscope;

TEST(Features, EmptyText) {
  EXPECT_TRUE(featurize("", FeatureConfig{}).empty());
  EXPECT_TRUE(featurize(" ,;. ", FeatureConfig{}).empty());
}

TEST(Features, Deterministic) {
  const std::string s = "Die Bürger haben genug von den Altparteien.";
  EXPECT_EQ(featurize(s, FeatureConfig{}), featurize(s, FeatureConfig{}));
}

TEST(Features, RepeatedUnigramDoublesWeight) {
  FeatureConfig cfg;
  cfg.word_bigrams = false;
  cfg.char_ngram_min = cfg.char_ngram_max = 0;
  const auto twice = featurize("ab ab", cfg);
  const auto once = featurize("ab", cfg);
  ASSERT_EQ(twice.entries.size(), 1u);
  ASSERT_EQ(once.entries.size(), 1u);
  EXPECT_EQ(twice.entries[0].index, feature_bucket("w:ab", cfg.hash_bits));
  EXPECT_EQ(twice.entries[0].weight, 2.0);
  EXPECT_EQ(once.entries[0].weight, 1.0);
}

TEST(Features, HandEnumeratedKeys) {
  FeatureConfig cfg;
  cfg.char_ngram_min = 3;
  cfg.char_ngram_max = 5;
  const std::vector<std::string> expected{"w:ab",  "w:cd",  "b:ab cd", "c:<ab", "c:ab>",
                                          "c:<ab>", "c:<cd", "c:cd>",  "c:<cd>"};
  EXPECT_EQ(feature_keys("Ab cd", cfg), expected);
}

TEST(Features, CharacterNgramsCountCodepoints) {
  FeatureConfig cfg;
  cfg.word_unigrams = cfg.word_bigrams = false;
  cfg.char_ngram_min = cfg.char_ngram_max = 3;
  EXPECT_EQ(feature_keys("Öl", cfg), (std::vector<std::string>{"c:<öl", "c:öl>"}));
}

TEST(Features, WeightsEqualKeyMultiplicities) {
  FeatureConfig cfg;
  cfg.hash_bits = 6;  // small space so collisions happen
  const std::string s = "Wir da unten, die da oben, und wieder die da oben.";
  std::map<std::uint32_t, double> expected;
  for (const auto& k : feature_keys(s, cfg)) expected[feature_bucket(k, cfg.hash_bits)] += 1.0;
  const auto v = featurize(s, cfg);
  ASSERT_EQ(v.entries.size(), expected.size());
  auto it = expected.begin();
  for (const auto& e : v.entries) {
    EXPECT_EQ(e.index, it->first);
    EXPECT_EQ(e.weight, it->second);
    ++it;
  }
}

TEST(Features, HashIsStable) {
  // Reference values from an independent FNV-1a + fmix64 script.
  EXPECT_EQ(feature_hash(""), 0xefd01f60ba992926ULL);
  EXPECT_EQ(feature_hash("w:ab"), 0x9774fb31802560f1ULL);
  EXPECT_EQ(feature_hash("c:<öl"), 0x96f9278af83db0ddULL);
  EXPECT_EQ(feature_bucket("w:ab", 8), 0xf1u);
}

TEST(Features, ConfigValidation) {
  FeatureConfig cfg;
  cfg.hash_bits = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.hash_bits = 31;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.hash_bits = 10;
  cfg.char_ngram_min = 4;
  cfg.char_ngram_max = 3;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.char_ngram_min = 0;
  cfg.char_ngram_max = 0;
  EXPECT_NO_THROW(cfg.validate());
}
