#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mcbr24/card_codec.hpp"
#include "mcbr24/errors.hpp"
#include "mcbr24/puzzle.hpp"

using namespace mcbr;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "mcbr24_codec_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("card_codec") {
  TEST_CASE("round trip on every puzzle") {
    int failures = 0;
    for (const Puzzle& p : enumerate_puzzles()) {
      if (recognize(render(p)) != p.text()) ++failures;
    }
    CHECK(failures == 0);
  }

  TEST_CASE("round trip under 2% salt-and-pepper noise") {
    int failures = 0;
    std::uint64_t seed = 1;
    for (const Puzzle& p : enumerate_puzzles()) {
      const CardImage img = render(p, {0.02, seed++});
      if (recognize(img) != p.text()) ++failures;
    }
    CHECK(failures == 0);
  }

  TEST_CASE("render is deterministic and noise depends on the seed") {
    const Puzzle p({4, 5, 9, 10});
    CHECK(render(p) == render(p));
    CHECK(render(p, {0.02, 9}) == render(p, {0.02, 9}));
    CHECK_FALSE(render(p, {0.02, 9}) == render(p, {0.02, 10}));
    CHECK_FALSE(render(p) == render(Puzzle({4, 5, 9, 11})));
  }

  TEST_CASE("noise density is roughly honoured") {
    const CardImage clean = render(Puzzle({1, 2, 3, 4}));
    const CardImage noisy = render(Puzzle({1, 2, 3, 4}), {0.1, 3});
    int changed = 0;
    for (std::size_t i = 0; i < CardImage::kPixels; ++i) changed += clean.pixels()[i] != noisy.pixels()[i];
    // About half the replaced pixels keep their colour.
    CHECK(changed > 0.02 * CardImage::kPixels);
    CHECK(changed < 0.1 * CardImage::kPixels);
  }

  TEST_CASE("glyphs are distinct and inside the reject threshold") {
    const auto& atlas = GlyphAtlas::instance();
    for (int a = 1; a <= 13; ++a) {
      for (int b = a + 1; b <= 13; ++b) CHECK(GlyphAtlas::distance(atlas.glyph(a), atlas.glyph(b)) > 0);
    }
    CHECK(atlas.reject_threshold() > 0);
  }

  TEST_CASE("non-card images are rejected") {
    std::vector<std::uint8_t> black(CardImage::kPixels, 0);
    CHECK_THROWS_AS(recognize(CardImage(black)), NoGlyphMatch);
    CardImage half = render(Puzzle({1, 2, 3, 4}));
    for (int y = 0; y < 45; ++y) {
      for (int x = 0; x < 45; ++x) half.set(x, y, 0);
    }
    CHECK_THROWS_AS(recognize(half), NoGlyphMatch);
  }

  TEST_CASE("wrong pixel count") { CHECK_THROWS_AS(CardImage(std::vector<std::uint8_t>(100)), ImageFormatError); }

  TEST_CASE("PGM round trip") {
    const CardImage img = render(Puzzle({1, 3, 7, 12}), {0.01, 5});
    const std::string bytes = encode_pgm(img);
    CHECK(bytes.rfind("P5\n90 90\n255\n", 0) == 0);
    CHECK(bytes.size() == 13 + CardImage::kPixels);
    CHECK(decode_pgm(bytes) == img);

    const auto path = scratch("card.pgm");
    write_pgm(img, path);
    CHECK(read_pgm(path) == img);
    CHECK(recognize(read_pgm(path)) == "1 3 7 12");
  }

  TEST_CASE("PGM header comments are skipped") {
    const CardImage img = render(Puzzle({2, 2, 8, 13}));
    std::string bytes = encode_pgm(img);
    bytes.insert(3, "# made by hand\n");
    CHECK(decode_pgm(bytes) == img);
  }

  TEST_CASE("malformed PGM") {
    const std::string good = encode_pgm(CardImage{});
    CHECK_THROWS_AS(decode_pgm("P2\n90 90\n255\n"), ImageFormatError);
    CHECK_THROWS_AS(decode_pgm("P5\n80 90\n255\n" + std::string(7200, '\xff')), ImageFormatError);
    CHECK_THROWS_AS(decode_pgm("P5\n90 90\n65535\n"), ImageFormatError);
    CHECK_THROWS_AS(decode_pgm(good.substr(0, good.size() - 1)), ImageFormatError);
    CHECK_THROWS_AS(decode_pgm(""), ImageFormatError);
    CHECK_THROWS_AS(read_pgm(scratch("does-not-exist.pgm")), MissingImageFile);
  }
}
