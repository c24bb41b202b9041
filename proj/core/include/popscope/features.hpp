#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace popscope {

struct FeatureConfig {
  unsigned hash_bits = 18;  // 2^18 = 262,144 buckets
  bool lowercase = true;
  bool word_unigrams = true;
  bool word_bigrams = true;
  unsigned char_ngram_min = 3;  // 0 disables character n-grams
  unsigned char_ngram_max = 5;

  std::uint32_t hash_size() const { return std::uint32_t{1} << hash_bits; }
  /// Throws std::invalid_argument unless 1 <= hash_bits <= 30 and the
  /// character n-gram range is empty or ordered.
  void validate() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct FeatureEntry {
  std::uint32_t index = 0;
  double weight = 0.0;

  friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// Sparse term-frequency vector, sorted by index, no duplicate indices.
struct FeatureVector {
  std::vector<FeatureEntry> entries;

  bool empty() const { return entries.empty(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// 64-bit FNV-1a over the key bytes followed by the MurmurHash3 fmix64
/// finalizer. Platform independent.
std::uint64_t feature_hash(std::string_view key);

/// Low `bits` bits of feature_hash(key).
std::uint32_t feature_bucket(std::string_view key, unsigned bits);

/// The n-gram keys of `text`, in generation order, with repetitions:
///   "w:" + token              word unigrams
///   "b:" + token + " " + next word bigrams
///   "c:" + n codepoints       character n-grams of "<token>"
/// Tokens are maximal runs of letters/digits, case-folded when configured.
std::vector<std::string> feature_keys(std::string_view text, const FeatureConfig& config);

FeatureVector featurize(std::string_view text, const FeatureConfig& config);

}  // namespace popscope
