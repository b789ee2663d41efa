#include "rarp/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "rarp/random.hpp"

namespace rarp {

const std::vector<std::string>& standard_class_labels() {
  static const std::vector<std::string> labels{
      "road",       "sidewalk", "building", "wall",  "fence", "pole",  "traffic_light",
      "traffic_sign", "vegetation", "terrain", "sky", "person", "rider", "car",
      "truck",      "bus",      "train",    "motorcycle", "bicycle"};
  return labels;
}

std::uint64_t item_shape_seed(const ItemSpec& item) {
  std::uint64_t s = mix_seed(std::bit_cast<std::uint64_t>(item.anchor.x), std::bit_cast<std::uint64_t>(item.anchor.y));
  return mix_seed(s, static_cast<std::uint64_t>(item.id));
}

Instance generate_instance(const GenConfig& config, std::uint64_t seed, std::size_t index) {
  if (config.n_min < 1 || config.n_max < config.n_min) throw std::invalid_argument("item count range must satisfy 1 <= min <= max");
  if (!(config.size_min > 0.0) || config.size_max < config.size_min) {
    throw std::invalid_argument("item size range must satisfy 0 < min <= max");
  }
  Instance inst{config.canvas, {}, config.separation};
  if (auto v = validate_instance(inst); !v.empty()) throw InvalidInstance(std::move(v));

  const std::uint64_t inst_seed = mix_seed(seed, index);
  Rng rng(inst_seed);
  const auto span = static_cast<std::uint64_t>(config.n_max - config.n_min + 1);
  const std::size_t n = static_cast<std::size_t>(config.n_min) + rng.below(span);
  const std::vector<Point2> anchors =
      sample_anchors(config.canvas, n, config.separation, config.margin_frac, mix_seed(inst_seed, 1));

  const auto& labels = standard_class_labels();
  for (std::size_t i = 0; i < n; ++i) {
    ItemSpec it;
    it.id = static_cast<int>(i);
    it.anchor = anchors[i];
    it.class_label = labels[rng.below(labels.size())];
    const Extent e = shape_bbox(gen_bezier_blob(item_shape_seed(it), config.shape_controls, config.irregularity));
    const double size = rng.uniform(config.size_min, config.size_max);
    it.base_width = size * e.width;
    it.base_height = size * e.height;
    inst.items.push_back(std::move(it));
  }
  return inst;
}

std::vector<BlobShape> item_shapes(const Instance& instance, int controls, double irregularity) {
  std::vector<BlobShape> out;
  out.reserve(instance.items.size());
  for (const ItemSpec& it : instance.items) out.push_back(gen_bezier_blob(item_shape_seed(it), controls, irregularity));
  return out;
}

std::vector<std::optional<int>> standard_class_ids(const Instance& instance) {
  const auto& labels = standard_class_labels();
  std::vector<std::optional<int>> out;
  for (const ItemSpec& it : instance.items) {
    const auto pos = std::find(labels.begin(), labels.end(), it.class_label);
    if (pos == labels.end()) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(static_cast<int>(pos - labels.begin()) + 1);
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("slope fit needs distinct x values");
  return (m * sxy - sx * sy) / denom;
}

}  // namespace rarp
