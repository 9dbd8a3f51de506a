#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace tkndd {

// Ground-truth relation between two pages of the same application. The
// enumerator order doubles as the tie-break order for predictions.
enum class ClassLabel { Clone = 0, NearDuplicate = 1, Distinct = 2 };

inline constexpr std::size_t kClassCount = 3;
inline constexpr std::array<ClassLabel, kClassCount> kAllLabels{
    ClassLabel::Clone, ClassLabel::NearDuplicate, ClassLabel::Distinct};

inline std::string_view to_string(ClassLabel l) {
  switch (l) {
    case ClassLabel::Clone:
      return "clone";
    case ClassLabel::NearDuplicate:
      return "near_duplicate";
    case ClassLabel::Distinct:
      return "distinct";
  }
  return "?";
}

// Case-insensitive.
inline std::optional<ClassLabel> parse_label(std::string_view s) {
  std::string lowered(s);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (ClassLabel l : kAllLabels)
    if (to_string(l) == lowered) return l;
  return std::nullopt;
}

inline std::size_t index_of(ClassLabel l) { return static_cast<std::size_t>(l); }

}  // namespace tkndd
