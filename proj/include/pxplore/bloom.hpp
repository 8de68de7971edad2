#pragma once

#include <optional>
#include <string_view>

namespace pxplore {

// Ordinal Bloom's taxonomy level.
enum class Bloom : int {
  kRemembering = 0,
  kUnderstanding = 1,
  kApplying = 2,
  kAnalyzing = 3,
  kEvaluating = 4,
  kCreating = 5,
};

inline constexpr int kBloomLevels = 6;

std::string_view bloom_name(Bloom b);
std::optional<Bloom> parse_bloom(std::string_view name);

inline int bloom_distance(Bloom a, Bloom b) {
  const int d = static_cast<int>(a) - static_cast<int>(b);
  return d < 0 ? -d : d;
}

}  // namespace pxplore
