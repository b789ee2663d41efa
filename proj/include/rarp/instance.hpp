#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rarp/errors.hpp"
#include "rarp/geometry.hpp"
#include "rarp/random.hpp"

namespace rarp {

struct CanvasSpec {
  double width = 0.0;
  double height = 0.0;

  AxisBox box() const { return {{width * 0.5, height * 0.5}, width, height}; }
  bool x_is_major() const { return width >= height; }

  friend bool operator==(const CanvasSpec&, const CanvasSpec&) = default;
};

struct ItemSpec {
  int id = 0;
  std::string class_label;
  double base_width = 0.0;
  double base_height = 0.0;
  Point2 anchor;

  AxisBox box_at(double scale) const { return {anchor, base_width * scale, base_height * scale}; }

  friend bool operator==(const ItemSpec&, const ItemSpec&) = default;
};

// Minimum anchor separation. The effective threshold on each axis is
// max(sep_abs, sep_pct * canvas dimension along that axis), and both axes
// must clear their threshold for every pair of anchors.
struct SeparationSpec {
  double sep_abs = 0.0;
  double sep_pct = 0.0;

  double along_x(const CanvasSpec& canvas) const;
  double along_y(const CanvasSpec& canvas) const;

  friend bool operator==(const SeparationSpec&, const SeparationSpec&) = default;
};

struct Instance {
  CanvasSpec canvas;
  std::vector<ItemSpec> items;
  SeparationSpec separation;

  std::size_t size() const { return items.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class ViolationRule {
  InvalidCanvas,
  InvalidSeparation,
  NonContiguousIds,
  NonPositiveSize,
  AnchorOutsideCanvas,
  CoincidentAnchors,
  SeparationX,
  SeparationY,
};

const char* to_string(ViolationRule rule);

struct Violation {
  ViolationRule rule;
  std::vector<int> indices;
  std::string detail;
};

// Empty iff the instance satisfies every input constraint.
std::vector<Violation> validate_instance(const Instance& instance);

std::string describe(const std::vector<Violation>& violations);

class InvalidInstance : public ValidationError {
 public:
  explicit InvalidInstance(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Row-major grid of non-negative weights laid over a region.
struct WeightGrid {
  int width = 0;
  int height = 0;
  std::vector<double> weights;
};

// Distribution that anchor candidates are drawn from. The uniform context is
// the default; an empirical context takes a caller-provided weight grid over
// the canvas (cell (0,0) at the canvas origin).
class SpatialContext {
 public:
  static SpatialContext uniform();
  static SpatialContext empirical(WeightGrid grid);

  // Draws one candidate inside `region`. The major-axis coordinate is drawn
  // before the minor-axis one. Returns nullopt when an empirical draw lands
  // outside the region (counts as a rejected attempt).
  std::optional<Point2> draw(Rng& rng, const CanvasSpec& canvas, const AxisBox& region) const;

 private:
  struct Empirical;
  std::shared_ptr<const Empirical> empirical_;
};

// Samples n anchors inside the canvas shrunk by margin_frac per side.
// Throws CapacityError when the separation leaves too few admissible slots or
// the rejection budget (1000 * n attempts) runs out.
std::vector<Point2> sample_anchors(const CanvasSpec& canvas, std::size_t n, const SeparationSpec& sep,
                                   double margin_frac, std::uint64_t seed,
                                   const SpatialContext& context = SpatialContext::uniform());

// Largest number of coordinates with pairwise gaps strictly above `sep` in an
// interval of length `length`.
std::size_t axis_slot_capacity(double length, double sep);

// Smallest k >= 0 such that every item shrunk by 2^-k, centered on its
// anchor, is interior-disjoint from every other with strictly positive slack.
int canonical_exponent(const Instance& instance);

struct BoolGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // row-major, nonzero = foreground

  bool at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x] != 0; }
};

struct SnugCanvas {
  CanvasSpec canvas;
  Point2 offset;
};

// Tight bounding box of the foreground cells. Throws EmptyMaskError.
SnugCanvas snug_canvas_from_mask(const BoolGrid& mask);

// Instance file I/O. read_instance throws ParseError on malformed input and
// InvalidInstance (a ValidationError) when `validate` is set and the
// instance breaks an input constraint.
Instance parse_instance(const std::string& text, bool validate = true);
std::string serialize_instance(const Instance& instance);
Instance read_instance(const std::string& path, bool validate = true);
void write_instance(const Instance& instance, const std::string& path);

}  // namespace rarp
