#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mcbr24/math24.hpp"
#include "mcbr24/puzzle.hpp"

namespace mcbr {

// Pair targets, in feature order.
inline constexpr std::array<int, 8> kPairTargets{1, 2, 3, 4, 6, 8, 12, 24};

// Counts of position pairs that can make each target with one operator.
struct FeatureVector {
  static constexpr std::size_t kSize = 40;

  std::array<int, 8> global_counts{};                        // per target, in [0,6]
  std::array<std::array<int, 8>, 4> per_position_counts{};  // [position-1][target], in [0,3]

  // Global counts first, then positions 1..4 each with 8 targets.
  std::vector<double> values() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector extract_features(const Puzzle& puzzle);

// Four batches of five bits in category order; per batch the category
// indicator then one bit per puzzle position of the large value's numbers.
struct LabelVector {
  static constexpr std::size_t kSize = 20;
  std::array<std::uint8_t, kSize> bits{};

  std::span<const std::uint8_t, 5> batch(CategoryId id) const {
    return std::span<const std::uint8_t, 5>(bits.data() + 5 * category_index(id), 5);
  }
  std::vector<double> values() const { return {bits.begin(), bits.end()}; }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;
};

// Position bits of same-category solutions are OR-ed together.
LabelVector encode_labels(std::span<const Solution> solutions);

// 44 network inputs: the numbers / 13 followed by the 40 counts / 6.
using ModelInput = std::array<double, 44>;
ModelInput model_input(const Puzzle& puzzle);

}  // namespace mcbr
