#include "popscope/dimension.hpp"

namespace popscope {

std::optional<Dimension> parse_dimension(std::string_view name) {
  constexpr std::array<std::string_view, kNumDimensions> enumerators{
      "AntiElitism", "PeopleCentrism", "LeftWing", "RightWing"};
  for (Dimension d : kDimensions) {
    if (name == column_name(d) || name == display_name(d) ||
        name == enumerators[index_of(d)]) {
      return d;
    }
  }
  return std::nullopt;
}

}  // namespace popscope
