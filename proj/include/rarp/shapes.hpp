#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rarp/geometry.hpp"
#include "rarp/instance.hpp"
#include "rarp/solver.hpp"

namespace rarp {

// Closed blob outline. Control points are interpolated by the boundary; the
// boundary is the sampled curve without the repeated closing vertex.
struct BlobShape {
  std::vector<Point2> control_points;
  std::vector<Point2> boundary;

  BlobShape scaled(double sx, double sy) const;
};

// Random closed blob: control points at jittered, strictly increasing angles
// with jittered radii, joined by cubic Bezier segments whose handles follow
// the neighbouring chord (the circle-optimal handle length when
// irregularity == 0). If smoothing makes the outline self-intersect, the
// handles are shortened until it is simple. The result is centered in and
// uniformly scaled to the unit square.
BlobShape gen_bezier_blob(std::uint64_t seed, int n_control, double irregularity);

struct Extent {
  double width = 0.0;
  double height = 0.0;
};

AxisBox shape_bounds(const BlobShape& shape);
Extent shape_bbox(const BlobShape& shape);

// Brute-force segment-pair scan over a closed polyline.
bool is_simple_polygon(std::span<const Point2> ring);

struct MaskImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> cells;  // row-major class indices, 0 = background

  MaskImage() = default;
  MaskImage(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w) * h, 0) {}

  std::uint16_t at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const MaskImage&, const MaskImage&) = default;
};

// Mask size for a canvas: each dimension rounded to whole pixels (min 1).
std::pair<int, int> mask_dimensions(const CanvasSpec& canvas);

// Fills each item's shape, affinely fitted to its packed rect, with its class
// index. Pixel (x, y) is covered when its center (x + 0.5, y + 0.5) is inside
// the outline under the even-odd rule and inside the half-open rect.
MaskImage rasterize(const CanvasSpec& canvas, const std::vector<PackedBox>& packed,
                    const std::vector<BlobShape>& shapes, const std::vector<int>& class_ids);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Palette {
  std::vector<Rgb> colors;  // indexed by class index

  // Black background followed by the 19 Cityscapes training-class colors.
  static Palette standard();
};

// Palette config: JSON object {class_label: [r, g, b]}; the optional
// "background" entry overrides index 0.
std::map<std::string, Rgb> parse_palette_config(const std::string& text, const std::string& source = "palette");

// Index 0 is the background; label k of `labels` maps to index k + 1.
Palette palette_for_labels(const std::map<std::string, Rgb>& config, const std::vector<std::string>& labels);

enum class PpmFormat { P3, P6 };

std::string encode_ppm(const MaskImage& mask, const Palette& palette, PpmFormat format = PpmFormat::P3);
void write_mask(const MaskImage& mask, const Palette& palette, const std::string& path,
                PpmFormat format = PpmFormat::P3);

// Generic PNM raster (P1-P6) with one or three channels per pixel.
struct PnmImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  int max_value = 1;
  std::vector<std::uint16_t> samples;
};

PnmImage decode_pnm(const std::string& data, const std::string& source = "image");

// Maps colors back to class indices; throws PaletteError on a color the
// palette does not contain.
MaskImage decode_mask(const std::string& data, const Palette& palette);
MaskImage read_mask(const std::string& path, const Palette& palette);

// Foreground = any nonzero sample.
BoolGrid foreground_of(const PnmImage& image);

}  // namespace rarp
