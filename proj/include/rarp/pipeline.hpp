#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rarp/instance.hpp"
#include "rarp/shapes.hpp"
#include "rarp/solver.hpp"

namespace rarp {

// Parameters for synthesizing one batch of instances.
struct GenConfig {
  CanvasSpec canvas{1024, 768};
  SeparationSpec separation{8.0, 0.0};
  double margin_frac = 0.05;
  int n_min = 5;
  int n_max = 14;
  // Longer side of an item's bounding box, in pixels, before scaling.
  double size_min = 16.0;
  double size_max = 160.0;
  int shape_controls = 100;
  double irregularity = 0.6;
};

// Class names used for generated labels; index k is drawn with color k + 1 of
// the standard palette.
const std::vector<std::string>& standard_class_labels();

// Seed of the blob drawn for an item. It depends only on the item's id and
// anchor, so a renderer can rebuild the shape from the instance file alone.
std::uint64_t item_shape_seed(const ItemSpec& item);

// Instance `index` of a batch. Item dimensions are the bounding box of the
// item's blob scaled to a random size. Throws CapacityError and
// InvalidInstance (bad canvas or separation).
Instance generate_instance(const GenConfig& config, std::uint64_t seed, std::size_t index);

std::vector<BlobShape> item_shapes(const Instance& instance, int controls, double irregularity);

// Class index per item under the standard label list; nullopt entries for
// labels outside it.
std::vector<std::optional<int>> standard_class_ids(const Instance& instance);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rarp
