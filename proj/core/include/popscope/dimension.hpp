#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace popscope {

/// The four annotated dimensions. The declaration order is the column order of
/// every vector, file and report in the toolkit.
enum class Dimension : std::uint8_t {
  AntiElitism = 0,
  PeopleCentrism = 1,
  LeftWing = 2,
  RightWing = 3,
};

inline constexpr std::size_t kNumDimensions = 4;

inline constexpr std::array<Dimension, kNumDimensions> kDimensions{
    Dimension::AntiElitism, Dimension::PeopleCentrism, Dimension::LeftWing,
    Dimension::RightWing};

template <class T>
using PerDimension = std::array<T, kNumDimensions>;

using LabelVector = PerDimension<std::uint8_t>;
using ProbVector = PerDimension<double>;

constexpr std::size_t index_of(Dimension d) noexcept {
  return static_cast<std::size_t>(d);
}

/// Column name used in annotation, gold and prediction files.
constexpr std::string_view column_name(Dimension d) noexcept {
  constexpr std::array<std::string_view, kNumDimensions> names{
      "antielite", "pplcentr", "left", "right"};
  return names[index_of(d)];
}

constexpr std::string_view display_name(Dimension d) noexcept {
  constexpr std::array<std::string_view, kNumDimensions> names{
      "Anti-Elitism", "People-Centrism", "Left-Wing Ideology",
      "Right-Wing Ideology"};
  return names[index_of(d)];
}

/// Accepts column names ("antielite"), enumerator names ("AntiElitism") and
/// display names.
std::optional<Dimension> parse_dimension(std::string_view name);

}  // namespace popscope
