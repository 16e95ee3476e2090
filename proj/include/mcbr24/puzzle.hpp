#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace mcbr {

// Four card numbers in [1, 13], nondecreasing. Positions are 1-based and
// refer to the sorted order.
class Puzzle {
 public:
  static constexpr int kMinNumber = 1;
  static constexpr int kMaxNumber = 13;
  static constexpr int kSize = 4;

  // Throws InvalidPuzzle unless the numbers are in range and sorted.
  explicit Puzzle(std::array<int, kSize> numbers);

  static Puzzle from_unsorted(std::array<int, kSize> numbers);
  // Parses "a b c d" (any whitespace). Throws InvalidPuzzle.
  static Puzzle parse(std::string_view text);

  const std::array<int, kSize>& numbers() const { return numbers_; }
  int at(int position) const { return numbers_.at(static_cast<std::size_t>(position - 1)); }

  std::string text() const;  // "4 5 9 10"
  std::string id() const;    // "04-05-09-10"

  friend auto operator<=>(const Puzzle&, const Puzzle&) = default;

 private:
  std::array<int, kSize> numbers_;
};

// Every multiset of four numbers from [1, 13], lexicographic order (1820).
std::vector<Puzzle> enumerate_puzzles();

}  // namespace mcbr
