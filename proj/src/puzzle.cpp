#include "mcbr24/puzzle.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "mcbr24/errors.hpp"

namespace mcbr {

Puzzle::Puzzle(std::array<int, kSize> numbers) : numbers_(numbers) {
  for (int n : numbers_) {
    if (n < kMinNumber || n > kMaxNumber) {
      throw InvalidPuzzle("puzzle number out of range [1,13]: " + std::to_string(n));
    }
  }
  if (!std::is_sorted(numbers_.begin(), numbers_.end())) {
    throw InvalidPuzzle("puzzle numbers must be nondecreasing");
  }
}

Puzzle Puzzle::from_unsorted(std::array<int, kSize> numbers) {
  std::sort(numbers.begin(), numbers.end());
  return Puzzle(numbers);
}

Puzzle Puzzle::parse(std::string_view text) {
  std::vector<int> values;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t') {
      ++i;
      continue;
    }
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (ec != std::errc{}) throw InvalidPuzzle("puzzle text is not a list of integers: '" + std::string(text) + "'");
    i = static_cast<std::size_t>(ptr - text.data());
    if (i < text.size() && text[i] != ' ' && text[i] != '\t') {
      throw InvalidPuzzle("puzzle text is not a list of integers: '" + std::string(text) + "'");
    }
    values.push_back(v);
  }
  if (values.size() != kSize) {
    throw InvalidPuzzle("puzzle needs exactly 4 numbers, got " + std::to_string(values.size()));
  }
  return Puzzle({values[0], values[1], values[2], values[3]});
}

std::string Puzzle::text() const {
  std::string out;
  for (int n : numbers_) {
    if (!out.empty()) out += ' ';
    out += std::to_string(n);
  }
  return out;
}

std::string Puzzle::id() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d-%02d-%02d-%02d", numbers_[0], numbers_[1], numbers_[2], numbers_[3]);
  return buf;
}

std::vector<Puzzle> enumerate_puzzles() {
  std::vector<Puzzle> out;
  out.reserve(1820);
  for (int a = Puzzle::kMinNumber; a <= Puzzle::kMaxNumber; ++a)
    for (int b = a; b <= Puzzle::kMaxNumber; ++b)
      for (int c = b; c <= Puzzle::kMaxNumber; ++c)
        for (int d = c; d <= Puzzle::kMaxNumber; ++d) out.emplace_back(std::array{a, b, c, d});
  return out;
}

}  // namespace mcbr
