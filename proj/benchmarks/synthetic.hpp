#pragma once

#include <string>
#include <vector>

#include "popscope/rng.hpp"

namespace bench {

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words{
      "Regierung", "Bürger",  "Antrag",    "Haushalt",  "Kollegen", "Ausschuss", "Gesetz",
      "Menschen",  "Land",    "Verantwortung", "Zukunft", "Wirtschaft", "Steuern", "Frage",
      "wir",       "die",     "und",       "nicht",     "haben",    "müssen",    "endlich",
      "Elite",     "Volk",    "Konzerne",  "Rente",     "Grenzen",  "Schulen",   "Straßen",
      "Dr.",       "z. B.",   "heute",     "wieder",    "über",     "für",       "gegen"};
  return words;
}

/// Pseudo-speech text: `sentences` sentences of 8-20 words.
inline std::string speech_text(popscope::Rng& rng, std::size_t sentences) {
  const auto& v = vocabulary();
  std::string out;
  for (std::size_t s = 0; s < sentences; ++s) {
    const auto n = 8 + rng.below(13);
    for (std::uint64_t w = 0; w < n; ++w) {
      if (w) out += ' ';
      out += v[rng.below(v.size())];
    }
    out += rng.below(5) == 0 ? "? " : ". ";
  }
  return out;
}

}  // namespace bench
