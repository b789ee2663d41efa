#include "rarp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rarp {

double SeparationSpec::along_x(const CanvasSpec& canvas) const {
  return std::max(sep_abs, sep_pct * canvas.width);
}

double SeparationSpec::along_y(const CanvasSpec& canvas) const {
  return std::max(sep_abs, sep_pct * canvas.height);
}

const char* to_string(ViolationRule rule) {
  switch (rule) {
    case ViolationRule::InvalidCanvas: return "InvalidCanvas";
    case ViolationRule::InvalidSeparation: return "InvalidSeparation";
    case ViolationRule::NonContiguousIds: return "NonContiguousIds";
    case ViolationRule::NonPositiveSize: return "NonPositiveSize";
    case ViolationRule::AnchorOutsideCanvas: return "AnchorOutsideCanvas";
    case ViolationRule::CoincidentAnchors: return "CoincidentAnchors";
    case ViolationRule::SeparationX: return "SeparationX";
    case ViolationRule::SeparationY: return "SeparationY";
  }
  return "?";
}

std::vector<Violation> validate_instance(const Instance& instance) {
  std::vector<Violation> out;
  const CanvasSpec& canvas = instance.canvas;
  const auto finite = [](double v) { return std::isfinite(v); };

  if (!(finite(canvas.width) && finite(canvas.height) && canvas.width > 0.0 && canvas.height > 0.0)) {
    out.push_back({ViolationRule::InvalidCanvas, {}, "canvas dimensions must be positive and finite"});
    return out;
  }

  const SeparationSpec& sep = instance.separation;
  const double sep_x = sep.along_x(canvas);
  const double sep_y = sep.along_y(canvas);
  if (!(finite(sep.sep_abs) && finite(sep.sep_pct) && sep.sep_abs >= 0.0 && sep.sep_pct >= 0.0 &&
        sep.sep_pct < 1.0)) {
    out.push_back({ViolationRule::InvalidSeparation, {}, "sep_abs must be >= 0 and sep_pct in [0, 1)"});
  } else if (!(sep_x < canvas.width && sep_y < canvas.height)) {
    out.push_back({ViolationRule::InvalidSeparation, {}, "effective separation must be below the canvas dimension"});
  }

  const auto& items = instance.items;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const ItemSpec& it = items[i];
    const int idx = static_cast<int>(i);
    if (it.id != idx) {
      out.push_back({ViolationRule::NonContiguousIds, {idx}, "expected id " + std::to_string(i)});
    }
    if (!(finite(it.base_width) && finite(it.base_height) && it.base_width > 0.0 && it.base_height > 0.0)) {
      out.push_back({ViolationRule::NonPositiveSize, {idx}, "base dimensions must be positive"});
    }
    const Point2 a = it.anchor;
    if (!(finite(a.x) && finite(a.y) && a.x > 0.0 && a.x < canvas.width && a.y > 0.0 && a.y < canvas.height)) {
      out.push_back({ViolationRule::AnchorOutsideCanvas, {idx}, "anchor must lie strictly inside the canvas"});
    }
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      const Point2 a = items[i].anchor;
      const Point2 b = items[j].anchor;
      const std::vector<int> pair{static_cast<int>(i), static_cast<int>(j)};
      if (a == b) {
        out.push_back({ViolationRule::CoincidentAnchors, pair, "anchors coincide"});
        continue;
      }
      if (!(std::abs(a.x - b.x) > sep_x)) {
        out.push_back({ViolationRule::SeparationX, pair, "|dx| must exceed " + std::to_string(sep_x)});
      }
      if (!(std::abs(a.y - b.y) > sep_y)) {
        out.push_back({ViolationRule::SeparationY, pair, "|dy| must exceed " + std::to_string(sep_y)});
      }
    }
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    const Violation& v = violations[k];
    if (k != 0) os << "; ";
    os << to_string(v.rule);
    if (!v.indices.empty()) {
      os << '(';
      for (std::size_t i = 0; i < v.indices.size(); ++i) os << (i ? "," : "") << v.indices[i];
      os << ')';
    }
    if (!v.detail.empty()) os << ": " << v.detail;
  }
  return os.str();
}

InvalidInstance::InvalidInstance(std::vector<Violation> violations)
    : ValidationError("invalid instance: " + describe(violations)), violations_(std::move(violations)) {}

// ---------------------------------------------------------------------------
// Spatial context

namespace {

std::size_t pick(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

// Marginal CDF over the major axis plus one conditional CDF per major cell.
struct AxisTables {
  std::vector<double> major;
  std::vector<std::vector<double>> minor;
};

AxisTables build_tables(const WeightGrid& g, bool x_major) {
  const int n_major = x_major ? g.width : g.height;
  const int n_minor = x_major ? g.height : g.width;
  AxisTables t;
  t.major.resize(static_cast<std::size_t>(n_major));
  t.minor.assign(static_cast<std::size_t>(n_major), std::vector<double>(static_cast<std::size_t>(n_minor)));
  double total = 0.0;
  for (int m = 0; m < n_major; ++m) {
    double acc = 0.0;
    for (int k = 0; k < n_minor; ++k) {
      const int x = x_major ? m : k;
      const int y = x_major ? k : m;
      acc += g.weights[static_cast<std::size_t>(y) * g.width + x];
      t.minor[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] = acc;
    }
    total += acc;
    t.major[static_cast<std::size_t>(m)] = total;
  }
  return t;
}

}  // namespace

struct SpatialContext::Empirical {
  WeightGrid grid;
  AxisTables x_major;
  AxisTables y_major;
};

SpatialContext SpatialContext::uniform() { return {}; }

SpatialContext SpatialContext::empirical(WeightGrid grid) {
  if (grid.width <= 0 || grid.height <= 0 ||
      grid.weights.size() != static_cast<std::size_t>(grid.width) * grid.height) {
    throw std::invalid_argument("weight grid dimensions do not match its data");
  }
  double total = 0.0;
  for (const double w : grid.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("weight grid has no mass");
  auto emp = std::make_shared<Empirical>();
  emp->x_major = build_tables(grid, true);
  emp->y_major = build_tables(grid, false);
  emp->grid = std::move(grid);
  SpatialContext ctx;
  ctx.empirical_ = std::move(emp);
  return ctx;
}

std::optional<Point2> SpatialContext::draw(Rng& rng, const CanvasSpec& canvas, const AxisBox& region) const {
  const bool x_major = canvas.x_is_major();
  if (!empirical_) {
    Point2 p;
    if (x_major) {
      p.x = rng.uniform(region.x_min(), region.x_max());
      p.y = rng.uniform(region.y_min(), region.y_max());
    } else {
      p.y = rng.uniform(region.y_min(), region.y_max());
      p.x = rng.uniform(region.x_min(), region.x_max());
    }
    return p;
  }

  const WeightGrid& g = empirical_->grid;
  const AxisTables& t = x_major ? empirical_->x_major : empirical_->y_major;
  const std::size_t major = pick(t.major, rng.uniform());
  const std::vector<double>& cond = t.minor[major];
  if (!(cond.back() > 0.0)) return std::nullopt;
  const std::size_t minor = pick(cond, rng.uniform());

  const double cell_w = canvas.width / g.width;
  const double cell_h = canvas.height / g.height;
  const double jitter_major = rng.uniform();
  const double jitter_minor = rng.uniform();
  Point2 p;
  if (x_major) {
    p.x = (static_cast<double>(major) + jitter_major) * cell_w;
    p.y = (static_cast<double>(minor) + jitter_minor) * cell_h;
  } else {
    p.y = (static_cast<double>(major) + jitter_major) * cell_h;
    p.x = (static_cast<double>(minor) + jitter_minor) * cell_w;
  }
  if (!contains_closed(region, p)) return std::nullopt;
  return p;
}

// ---------------------------------------------------------------------------
// Anchor sampling

namespace {

// 1-D occupancy buckets over one canvas axis; a candidate is admissible when
// every accepted coordinate is more than `sep` away.
class AxisOccupancy {
 public:
  AxisOccupancy(double lo, double hi, double cell, double sep)
      : lo_(lo), cell_(cell), sep_(sep),
        buckets_(static_cast<std::size_t>(std::floor((hi - lo) / cell)) + 1) {}

  bool admits(double v) const {
    const std::size_t b0 = bucket(v - sep_);
    const std::size_t b1 = bucket(v + sep_);
    for (std::size_t b = b0; b <= b1; ++b) {
      for (const double u : buckets_[b]) {
        if (!(std::abs(u - v) > sep_)) return false;
      }
    }
    return true;
  }

  void insert(double v) { buckets_[bucket(v)].push_back(v); }

 private:
  std::size_t bucket(double v) const {
    const double k = std::floor((v - lo_) / cell_);
    if (k <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(k), buckets_.size() - 1);
  }

  double lo_;
  double cell_;
  double sep_;
  std::vector<std::vector<double>> buckets_;
};

}  // namespace

std::size_t axis_slot_capacity(double length, double sep) {
  if (!(sep > 0.0)) return std::numeric_limits<std::size_t>::max();
  if (!(length > 0.0)) return 1;
  return static_cast<std::size_t>(std::ceil(length / sep));
}

std::vector<Point2> sample_anchors(const CanvasSpec& canvas, std::size_t n, const SeparationSpec& sep,
                                   double margin_frac, std::uint64_t seed, const SpatialContext& context) {
  if (!(margin_frac >= 0.0 && margin_frac <= 0.4)) {
    throw std::invalid_argument("margin_frac must lie in [0, 0.4]");
  }
  if (!(canvas.width > 0.0 && canvas.height > 0.0)) throw std::invalid_argument("canvas must be non-empty");
  std::vector<Point2> out;
  if (n == 0) return out;

  const double mx = margin_frac * canvas.width;
  const double my = margin_frac * canvas.height;
  const AxisBox region = AxisBox::from_corners(mx, my, canvas.width - mx, canvas.height - my);
  const double sep_x = sep.along_x(canvas);
  const double sep_y = sep.along_y(canvas);

  const std::size_t cap = std::min(axis_slot_capacity(region.width, sep_x),
                                   axis_slot_capacity(region.height, sep_y));
  if (n > cap) {
    throw CapacityError("cannot place " + std::to_string(n) + " anchors: separation admits at most " +
                        std::to_string(cap) + " slots");
  }

  // Coarse occupancy cells sized by the absolute separation.
  const double cell = std::max(1.0, std::floor(sep.sep_abs));
  AxisOccupancy occ_x(region.x_min(), region.x_max(), cell, sep_x);
  AxisOccupancy occ_y(region.y_min(), region.y_max(), cell, sep_y);

  Rng rng(seed);
  const std::size_t budget = 1000 * n;
  std::size_t attempts = 0;
  out.reserve(n);
  while (out.size() < n) {
    if (attempts++ >= budget) {
      throw CapacityError("rejection budget exhausted after placing " + std::to_string(out.size()) + " of " +
                          std::to_string(n) + " anchors");
    }
    const std::optional<Point2> c = context.draw(rng, canvas, region);
    if (!c) continue;
    if (!(c->x > 0.0 && c->x < canvas.width && c->y > 0.0 && c->y < canvas.height)) continue;
    if (!occ_x.admits(c->x) || !occ_y.admits(c->y)) continue;
    occ_x.insert(c->x);
    occ_y.insert(c->y);
    out.push_back(*c);
  }
  return out;
}

// ---------------------------------------------------------------------------

int canonical_exponent(const Instance& instance) {
  const auto& items = instance.items;
  int k = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].anchor == items[j].anchor) {
        throw CoincidentAnchorError("items " + std::to_string(i) + " and " + std::to_string(j) +
                                    " share an anchor");
      }
      // Start from the exponent already required; a larger exponent can only
      // add slack.
      while (classify_overlap(items[i].box_at(std::ldexp(1.0, -k)), items[j].box_at(std::ldexp(1.0, -k))).tag !=
             OverlapTag::Disjoint) {
        ++k;
      }
    }
  }
  return k;
}

SnugCanvas snug_canvas_from_mask(const BoolGrid& mask) {
  int x0 = mask.width, y0 = mask.height, x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) throw EmptyMaskError("mask has no foreground cells");
  return {{static_cast<double>(x1 - x0 + 1), static_cast<double>(y1 - y0 + 1)},
          {static_cast<double>(x0), static_cast<double>(y0)}};
}

}  // namespace rarp
