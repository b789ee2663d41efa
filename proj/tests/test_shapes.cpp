#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>

#include "rarp/shapes.hpp"
#include "test_support.hpp"

namespace rarp {
namespace {

using testing::item;

TEST(BezierBlob, ZeroIrregularityIsACircle) {
  for (const int n : {4, 8, 100}) {
    const BlobShape s = gen_bezier_blob(5, n, 0.0);
    ASSERT_GE(s.boundary.size(), 16u);
    double sum = 0.0;
    std::vector<double> r;
    for (const Point2& p : s.boundary) r.push_back(std::hypot(p.x - 0.5, p.y - 0.5));
    for (const double v : r) sum += v;
    const double mean = sum / static_cast<double>(r.size());
    double var = 0.0;
    for (const double v : r) var += (v - mean) * (v - mean);
    var /= static_cast<double>(r.size());
    EXPECT_LT(std::sqrt(var), 1e-3 * mean) << "n=" << n;
    const Extent e = shape_bbox(s);
    EXPECT_NEAR(e.width, 1.0, 1e-9);
    EXPECT_NEAR(e.height, 1.0, 1e-3);
  }
}

TEST(BezierBlob, DeterministicPerSeed) {
  const BlobShape a = gen_bezier_blob(123, 100, 0.7);
  const BlobShape b = gen_bezier_blob(123, 100, 0.7);
  ASSERT_EQ(a.boundary.size(), b.boundary.size());
  EXPECT_EQ(std::memcmp(a.boundary.data(), b.boundary.data(), a.boundary.size() * sizeof(Point2)), 0);
  EXPECT_NE(gen_bezier_blob(124, 100, 0.7).boundary, a.boundary);
}

TEST(BezierBlob, AlwaysSimpleAndInUnitSquare) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = seed < 100 ? 4 : static_cast<int>(4 + seed % 60);
    const BlobShape s = gen_bezier_blob(seed, n, 1.0);
    ASSERT_TRUE(is_simple_polygon(s.boundary)) << "seed " << seed;
    for (const Point2& p : s.boundary) {
      ASSERT_GE(p.x, 0.0);
      ASSERT_LE(p.x, 1.0);
      ASSERT_GE(p.y, 0.0);
      ASSERT_LE(p.y, 1.0);
    }
  }
}

TEST(BezierBlob, RejectsBadParameters) {
  EXPECT_THROW(gen_bezier_blob(1, 3, 0.5), std::invalid_argument);
  EXPECT_THROW(gen_bezier_blob(1, 8, 1.5), std::invalid_argument);
}

TEST(SimplePolygon, BruteForceScan) {
  const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<Point2> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  EXPECT_TRUE(is_simple_polygon(square));
  EXPECT_FALSE(is_simple_polygon(bowtie));
}

TEST(ShapeBbox, LinearAndTight) {
  const BlobShape s = gen_bezier_blob(9, 30, 0.8);
  const Extent e = shape_bbox(s);
  const Extent e2 = shape_bbox(s.scaled(2.0, 1.0));
  EXPECT_EQ(e2.width, 2.0 * e.width);
  EXPECT_EQ(e2.height, e.height);
  const AxisBox b = shape_bounds(s);
  for (const Point2& p : s.boundary) EXPECT_TRUE(contains_closed(b, p));
}

TEST(Rasterize, EmptyListGivesBackground) {
  const MaskImage m = rasterize({7, 5}, {}, {}, {});
  EXPECT_EQ(m.width, 7);
  EXPECT_EQ(m.height, 5);
  for (const auto c : m.cells) EXPECT_EQ(c, 0);
}

TEST(Rasterize, DiscAreaAt512) {
  const CanvasSpec canvas{512, 512};
  const std::vector<PackedBox> packed{{0, canvas.box(), false}};
  const MaskImage m = rasterize(canvas, packed, {gen_bezier_blob(1, 64, 0.0)}, {1});
  double filled = 0;
  for (const auto c : m.cells) filled += c == 1;
  const double expected = std::numbers::pi * 256.0 * 256.0;
  EXPECT_NEAR(filled, expected, 0.02 * expected);
}

TEST(Rasterize, StaysInsideItsRect) {
  const CanvasSpec canvas{64, 48};
  const std::vector<PackedBox> packed{{0, AxisBox::from_corners(3.2, 4.7, 30.1, 40.9), false}};
  const MaskImage m = rasterize(canvas, packed, {gen_bezier_blob(2, 12, 0.9)}, {3});
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.at(x, y) != 0) ASSERT_TRUE(contains_closed(packed[0].rect, {x + 0.5, y + 0.5}));
}

// Renders each item alone and checks no pixel is claimed by two items.
TEST(Rasterize, SolvedItemsNeverShareAPixel) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const CanvasSpec canvas{rng.uniform(60, 200), rng.uniform(60, 200)};
    const Instance inst = testing::random_instance(rng.next(), 2 + rng.below(8), canvas, {2, 0}, 3, 40);
    const auto packed = trim(inst, greedy_solve(inst).solution);
    std::vector<int> owners(static_cast<std::size_t>(mask_dimensions(canvas).first * mask_dimensions(canvas).second), 0);
    for (std::size_t i = 0; i < packed.size(); ++i) {
      const MaskImage m = rasterize(canvas, {packed[i]}, {gen_bezier_blob(i, 16, 0.5)}, {1});
      for (std::size_t c = 0; c < m.cells.size(); ++c) owners[c] += m.cells[c];
    }
    for (const int o : owners) ASSERT_LE(o, 1);
  }
}

TEST(Rasterize, TouchingBoxesSplitCleanly) {
  const CanvasSpec canvas{40, 20};
  const std::vector<PackedBox> packed{{0, AxisBox::from_corners(0, 0, 20, 20), false},
                                      {1, AxisBox::from_corners(20, 0, 40, 20), false}};
  const BlobShape square{{}, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const MaskImage a = rasterize(canvas, {packed[0]}, {square}, {1});
  const MaskImage b = rasterize(canvas, {packed[1]}, {square}, {2});
  for (std::size_t c = 0; c < a.cells.size(); ++c) {
    EXPECT_FALSE(a.cells[c] != 0 && b.cells[c] != 0);
    EXPECT_TRUE(a.cells[c] != 0 || b.cells[c] != 0);
  }
}

TEST(Ppm, ExactTextFormat) {
  MaskImage m(2, 1);
  m.at(1, 0) = 1;
  const Palette p{{{0, 0, 0}, {255, 0, 0}}};
  EXPECT_EQ(encode_ppm(m, p), "P3\n2 1\n255\n0 0 0 255 0 0\n");
  m.at(0, 0) = 2;
  EXPECT_THROW(encode_ppm(m, p), PaletteError);
}

TEST(Ppm, RoundTripBothFormats) {
  MaskImage m(13, 7);
  Rng rng(4);
  for (auto& c : m.cells) c = static_cast<std::uint16_t>(rng.below(20));
  const Palette p = Palette::standard();
  ASSERT_EQ(p.colors.size(), 20u);
  EXPECT_EQ(decode_mask(encode_ppm(m, p, PpmFormat::P3), p), m);
  EXPECT_EQ(decode_mask(encode_ppm(m, p, PpmFormat::P6), p), m);

  const auto path = (std::filesystem::temp_directory_path() / "rarp_mask.ppm").string();
  write_mask(m, p, path);
  EXPECT_EQ(read_mask(path, p), m);
}

TEST(Ppm, UnknownColorOnReadBack) {
  EXPECT_THROW(decode_mask("P3\n1 1\n255\n1 2 3\n", Palette::standard()), PaletteError);
}

TEST(Palette, ConfigMapsLabels) {
  const auto cfg = parse_palette_config(R"({"car": [0, 0, 142], "road": [128, 64, 128], "background": [1, 1, 1]})");
  const Palette p = palette_for_labels(cfg, {"road", "car"});
  ASSERT_EQ(p.colors.size(), 3u);
  EXPECT_EQ(p.colors[0], (Rgb{1, 1, 1}));
  EXPECT_EQ(p.colors[1], (Rgb{128, 64, 128}));
  EXPECT_EQ(p.colors[2], (Rgb{0, 0, 142}));
  EXPECT_THROW(palette_for_labels(cfg, {"tree"}), PaletteError);
  EXPECT_THROW(parse_palette_config(R"({"car": [0, 0]})"), ParseError);
  EXPECT_THROW(parse_palette_config(R"({"car": [0, 0, 300]})"), ParseError);
}

TEST(Pnm, ForegroundFromBitmap) {
  const PnmImage img = decode_pnm("P1\n3 2\n0 1 0\n1 1 0\n");
  const BoolGrid g = foreground_of(img);
  EXPECT_EQ(g.width, 3);
  EXPECT_EQ(g.height, 2);
  const SnugCanvas s = snug_canvas_from_mask(g);
  EXPECT_EQ(s.canvas, (CanvasSpec{2, 2}));
  EXPECT_EQ(s.offset, (Point2{0, 0}));
}

}  // namespace
}  // namespace rarp
