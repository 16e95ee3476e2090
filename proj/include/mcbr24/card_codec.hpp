#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mcbr24/puzzle.hpp"

namespace mcbr {

// 8-bit grayscale card image, row-major.
class CardImage {
 public:
  static constexpr int kWidth = 90;
  static constexpr int kHeight = 90;
  static constexpr std::size_t kPixels = static_cast<std::size_t>(kWidth) * kHeight;

  CardImage() : pixels_(kPixels, 255) {}
  explicit CardImage(std::vector<std::uint8_t> pixels);  // throws ImageFormatError unless 8100 bytes

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, std::uint8_t v) { pixels_[index(x, y)] = v; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const CardImage&, const CardImage&) = default;

 private:
  static std::size_t index(int x, int y) { return static_cast<std::size_t>(y) * kWidth + static_cast<std::size_t>(x); }
  std::vector<std::uint8_t> pixels_;
};

struct RenderOptions {
  // Fraction of pixels replaced by salt (255) or pepper (0) noise.
  double noise_density = 0.0;
  std::uint64_t noise_seed = 0;
};

// Draws the four numbers in fixed quadrants: position 1 top-left, 2
// top-right, 3 bottom-left, 4 bottom-right. Deterministic for given options.
CardImage render(const Puzzle& puzzle, const RenderOptions& options = {});

// Reads a card back to "a b c d" by nearest-template matching per quadrant.
// Throws NoGlyphMatch when a quadrant is too far from every template.
std::string recognize(const CardImage& image);

// Quadrant templates for the values 1..13, shared by render and recognize.
class GlyphAtlas {
 public:
  static constexpr int kQuadrant = 45;
  using Quadrant = std::array<std::uint8_t, kQuadrant * kQuadrant>;

  static const GlyphAtlas& instance();

  const Quadrant& glyph(int value) const { return glyphs_.at(static_cast<std::size_t>(value - 1)); }
  // Distance above which a quadrant is not a card number: half the largest
  // template-to-black distance.
  std::uint64_t reject_threshold() const { return reject_threshold_; }

  static std::uint64_t distance(const Quadrant& a, const Quadrant& b);

 private:
  GlyphAtlas();
  std::array<Quadrant, 13> glyphs_{};
  std::uint64_t reject_threshold_ = 0;
};

// Binary PGM (P5), maxval 255.
void write_pgm(const CardImage& image, const std::filesystem::path& path);
CardImage read_pgm(const std::filesystem::path& path);
std::string encode_pgm(const CardImage& image);
CardImage decode_pgm(const std::string& bytes);

}  // namespace mcbr
