#include "popscope/features.hpp"

#include <algorithm>
#include <stdexcept>

#include "popscope/text.hpp"

namespace popscope {

void FeatureConfig::validate() const {
  if (hash_bits < 1 || hash_bits > 30) {
    throw std::invalid_argument("hash_bits must be in [1, 30]");
  }
  if (char_ngram_max != 0 && (char_ngram_min == 0 || char_ngram_min > char_ngram_max)) {
    throw std::invalid_argument("character n-gram range must satisfy 1 <= min <= max");
  }
}

std::uint64_t feature_hash(std::string_view key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

std::uint32_t feature_bucket(std::string_view key, unsigned bits) {
  return static_cast<std::uint32_t>(feature_hash(key) & ((std::uint64_t{1} << bits) - 1));
}

std::vector<std::string> feature_keys(std::string_view input, const FeatureConfig& config) {
  const std::string folded = config.lowercase ? text::fold_case(input) : std::string(input);
  const auto tokens = text::word_tokens(folded);
  std::vector<std::string> keys;
  if (config.word_unigrams) {
    for (auto t : tokens) keys.push_back("w:" + std::string(t));
  }
  if (config.word_bigrams) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      keys.push_back("b:" + std::string(tokens[i]) + " " + std::string(tokens[i + 1]));
    }
  }
  if (config.char_ngram_max > 0) {
    std::vector<std::size_t> starts;  // byte offsets of codepoints, plus end
    for (auto t : tokens) {
      const std::string padded = "<" + std::string(t) + ">";
      starts.clear();
      for (std::size_t pos = 0; pos < padded.size(); pos += text::decode_utf8(padded, pos).length) {
        starts.push_back(pos);
      }
      starts.push_back(padded.size());
      const std::size_t n_cp = starts.size() - 1;
      for (std::size_t n = config.char_ngram_min; n <= config.char_ngram_max; ++n) {
        for (std::size_t i = 0; i + n <= n_cp; ++i) {
          keys.push_back("c:" + padded.substr(starts[i], starts[i + n] - starts[i]));
        }
      }
    }
  }
  return keys;
}

FeatureVector featurize(std::string_view text, const FeatureConfig& config) {
  std::vector<std::uint32_t> buckets;
  for (const auto& key : feature_keys(text, config)) {
    buckets.push_back(feature_bucket(key, config.hash_bits));
  }
  std::sort(buckets.begin(), buckets.end());
  FeatureVector v;
  for (std::uint32_t b : buckets) {
    if (!v.entries.empty() && v.entries.back().index == b) {
      v.entries.back().weight += 1.0;
    } else {
      v.entries.push_back({b, 1.0});
    }
  }
  return v;
}

}  // namespace popscope
