#include "mcbr24/card_codec.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "mcbr24/errors.hpp"

namespace mcbr {

namespace {

constexpr int kFontW = 5;
constexpr int kFontH = 7;
constexpr int kScale = 3;
constexpr std::uint8_t kInk = 0;
constexpr std::uint8_t kPaper = 255;

// 5x7 digit font, one string per row, '#' = ink.
constexpr const char* kDigits[10][kFontH] = {
    {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."},
    {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."},
    {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"},
    {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."},
    {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."},
    {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."},
    {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."},
    {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."},
    {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."},
    {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."},
};

GlyphAtlas::Quadrant draw_value(int value) {
  GlyphAtlas::Quadrant q;
  q.fill(kPaper);
  const std::string digits = std::to_string(value);
  const int n = static_cast<int>(digits.size());
  const int width = (n * kFontW + (n - 1)) * kScale;
  const int height = kFontH * kScale;
  const int x0 = (GlyphAtlas::kQuadrant - width) / 2;
  const int y0 = (GlyphAtlas::kQuadrant - height) / 2;
  for (int d = 0; d < n; ++d) {
    const auto& rows = kDigits[digits[static_cast<std::size_t>(d)] - '0'];
    const int dx = x0 + d * (kFontW + 1) * kScale;
    for (int r = 0; r < kFontH; ++r) {
      for (int c = 0; c < kFontW; ++c) {
        if (rows[r][c] != '#') continue;
        for (int sy = 0; sy < kScale; ++sy) {
          for (int sx = 0; sx < kScale; ++sx) {
            const int x = dx + c * kScale + sx;
            const int y = y0 + r * kScale + sy;
            q[static_cast<std::size_t>(y * GlyphAtlas::kQuadrant + x)] = kInk;
          }
        }
      }
    }
  }
  return q;
}

std::pair<int, int> quadrant_origin(int position) {
  const int q = position - 1;
  return {(q % 2) * GlyphAtlas::kQuadrant, (q / 2) * GlyphAtlas::kQuadrant};
}

}  // namespace

CardImage::CardImage(std::vector<std::uint8_t> pixels) : pixels_(std::move(pixels)) {
  if (pixels_.size() != kPixels) {
    throw ImageFormatError("card image needs " + std::to_string(kPixels) + " pixels, got " +
                           std::to_string(pixels_.size()));
  }
}

GlyphAtlas::GlyphAtlas() {
  Quadrant black;
  black.fill(kInk);
  std::uint64_t worst = 0;
  for (int v = 1; v <= 13; ++v) {
    glyphs_[static_cast<std::size_t>(v - 1)] = draw_value(v);
    worst = std::max(worst, distance(glyphs_[static_cast<std::size_t>(v - 1)], black));
  }
  reject_threshold_ = worst / 2;
}

const GlyphAtlas& GlyphAtlas::instance() {
  static const GlyphAtlas atlas;
  return atlas;
}

std::uint64_t GlyphAtlas::distance(const Quadrant& a, const Quadrant& b) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<std::uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
  }
  return sum;
}

CardImage render(const Puzzle& puzzle, const RenderOptions& options) {
  const GlyphAtlas& atlas = GlyphAtlas::instance();
  CardImage image;
  for (int pos = 1; pos <= Puzzle::kSize; ++pos) {
    const auto& glyph = atlas.glyph(puzzle.at(pos));
    const auto [ox, oy] = quadrant_origin(pos);
    for (int y = 0; y < GlyphAtlas::kQuadrant; ++y) {
      for (int x = 0; x < GlyphAtlas::kQuadrant; ++x) {
        image.set(ox + x, oy + y, glyph[static_cast<std::size_t>(y * GlyphAtlas::kQuadrant + x)]);
      }
    }
  }
  if (options.noise_density > 0.0) {
    std::mt19937_64 rng(options.noise_seed);
    for (int y = 0; y < CardImage::kHeight; ++y) {
      for (int x = 0; x < CardImage::kWidth; ++x) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < options.noise_density) image.set(x, y, (rng() & 1U) ? kPaper : kInk);
      }
    }
  }
  return image;
}

std::string recognize(const CardImage& image) {
  const GlyphAtlas& atlas = GlyphAtlas::instance();
  std::string out;
  for (int pos = 1; pos <= Puzzle::kSize; ++pos) {
    const auto [ox, oy] = quadrant_origin(pos);
    GlyphAtlas::Quadrant q;
    for (int y = 0; y < GlyphAtlas::kQuadrant; ++y) {
      for (int x = 0; x < GlyphAtlas::kQuadrant; ++x) {
        q[static_cast<std::size_t>(y * GlyphAtlas::kQuadrant + x)] = image.at(ox + x, oy + y);
      }
    }
    int best_value = 0;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (int v = 1; v <= 13; ++v) {
      const std::uint64_t d = GlyphAtlas::distance(q, atlas.glyph(v));
      if (d < best) {
        best = d;
        best_value = v;
      }
    }
    if (best > atlas.reject_threshold()) {
      throw NoGlyphMatch("quadrant " + std::to_string(pos) + " matches no card number (distance " +
                         std::to_string(best) + " > " + std::to_string(atlas.reject_threshold()) + ")");
    }
    if (!out.empty()) out += ' ';
    out += std::to_string(best_value);
  }
  return out;
}

std::string encode_pgm(const CardImage& image) {
  std::string out = "P5\n" + std::to_string(CardImage::kWidth) + " " + std::to_string(CardImage::kHeight) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels().data()), image.pixels().size());
  return out;
}

CardImage decode_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  // Header tokens are separated by whitespace; '#' starts a comment line.
  auto next_token = [&]() {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  if (next_token() != "P5") throw ImageFormatError("not a binary PGM (P5)");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw ImageFormatError("bad PGM header");
  }
  if (w != CardImage::kWidth || h != CardImage::kHeight) {
    throw ImageFormatError("card images must be 90x90, got " + std::to_string(w) + "x" + std::to_string(h));
  }
  if (maxval != 255) throw ImageFormatError("PGM maxval must be 255");
  ++pos;  // single whitespace after maxval
  if (bytes.size() < pos + CardImage::kPixels) throw ImageFormatError("truncated PGM pixel data");
  std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + CardImage::kPixels));
  return CardImage(std::move(pixels));
}

void write_pgm(const CardImage& image, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ImageFormatError("cannot write " + path.string());
  f << encode_pgm(image);
}

CardImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw MissingImageFile("cannot open image " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return decode_pgm(ss.str());
}

}  // namespace mcbr
