#include "rarp/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rarp/random.hpp"

namespace rarp {

namespace {

Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point2 p, Point2 q, Point2 r) {
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
         q.y <= std::max(p.y, r.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, p1, q2)) return true;
  if (d2 == 0 && on_segment(q1, p2, q2)) return true;
  if (d3 == 0 && on_segment(p1, q1, p2)) return true;
  return d4 == 0 && on_segment(p1, q2, p2);
}

Point2 bezier(Point2 p0, Point2 p1, Point2 p2, Point2 p3, double t) {
  const double u = 1.0 - t;
  return (u * u * u) * p0 + (3.0 * u * u * t) * p1 + (3.0 * u * t * t) * p2 + (t * t * t) * p3;
}

std::vector<Point2> smooth_outline(const std::vector<Point2>& pts, double handle_scale, int samples) {
  const std::size_t n = pts.size();
  std::vector<Point2> handles(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 next = pts[(k + 1) % n];
    const Point2 prev = pts[(k + n - 1) % n];
    handles[k] = (0.5 * handle_scale) * (next - prev);
  }
  std::vector<Point2> out;
  out.reserve(n * static_cast<std::size_t>(samples));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k1 = (k + 1) % n;
    const Point2 b0 = pts[k], b3 = pts[k1];
    const Point2 b1 = b0 + handles[k], b2 = b3 - handles[k1];
    for (int s = 0; s < samples; ++s) {
      const Point2 p = bezier(b0, b1, b2, b3, static_cast<double>(s) / samples);
      if (out.empty() || !(p == out.back())) out.push_back(p);
    }
  }
  return out;
}

}  // namespace

BlobShape BlobShape::scaled(double sx, double sy) const {
  BlobShape out = *this;
  for (Point2& p : out.control_points) p = {p.x * sx, p.y * sy};
  for (Point2& p : out.boundary) p = {p.x * sx, p.y * sy};
  return out;
}

bool is_simple_polygon(std::span<const Point2> ring) {
  const std::size_t m = ring.size();
  if (m < 3) return false;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 a0 = ring[i], a1 = ring[(i + 1) % m];
    if (a0 == a1) return false;
    // Adjacent edges may only share their common vertex.
    const Point2 a2 = ring[(i + 2) % m];
    if (sign(cross(a0, a1, a2)) == 0 && ((a1.x - a0.x) * (a2.x - a1.x) + (a1.y - a0.y) * (a2.y - a1.y)) < 0.0) {
      return false;
    }
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_intersect(a0, a1, ring[j], ring[(j + 1) % m])) return false;
    }
  }
  return true;
}

BlobShape gen_bezier_blob(std::uint64_t seed, int n_control, double irregularity) {
  if (n_control < 4) throw std::invalid_argument("a blob needs at least 4 control points");
  if (!(irregularity >= 0.0 && irregularity <= 1.0)) throw std::invalid_argument("irregularity must lie in [0, 1]");

  Rng rng(seed);
  const auto n = static_cast<std::size_t>(n_control);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::vector<Point2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Angular jitter stays below half a step so the ordering is preserved.
    const double theta = (static_cast<double>(k) + irregularity * 0.4 * (2.0 * rng.uniform() - 1.0)) * step;
    const double radius = 1.0 - irregularity * 0.6 * rng.uniform();
    pts[k] = {radius * std::cos(theta), radius * std::sin(theta)};
  }

  const int samples = std::max(4, (256 + n_control - 1) / n_control);
  const double circle_handle = (4.0 / 3.0) * std::tan(step / 4.0) / std::sin(step);
  std::vector<Point2> outline;
  double handle = circle_handle;
  for (int attempt = 0; attempt < 24; ++attempt, handle *= 0.5) {
    outline = smooth_outline(pts, handle, samples);
    if (is_simple_polygon(outline)) break;
  }
  if (!is_simple_polygon(outline)) outline = smooth_outline(pts, 0.0, samples);

  BlobShape shape{std::move(pts), std::move(outline)};
  const AxisBox b = shape_bounds(shape);
  const double s = 1.0 / std::max(b.width, b.height);
  const double ox = (1.0 - b.width * s) * 0.5 - b.x_min() * s;
  const double oy = (1.0 - b.height * s) * 0.5 - b.y_min() * s;
  for (Point2& p : shape.control_points) p = {p.x * s + ox, p.y * s + oy};
  for (Point2& p : shape.boundary) p = {std::clamp(p.x * s + ox, 0.0, 1.0), std::clamp(p.y * s + oy, 0.0, 1.0)};
  return shape;
}

AxisBox shape_bounds(const BlobShape& shape) {
  if (shape.boundary.empty()) return {};
  double x0 = shape.boundary[0].x, x1 = x0, y0 = shape.boundary[0].y, y1 = y0;
  for (const Point2& p : shape.boundary) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return AxisBox::from_corners(x0, y0, x1, y1);
}

Extent shape_bbox(const BlobShape& shape) {
  const AxisBox b = shape_bounds(shape);
  return {b.width, b.height};
}

std::pair<int, int> mask_dimensions(const CanvasSpec& canvas) {
  return {std::max(1, static_cast<int>(std::lround(canvas.width))),
          std::max(1, static_cast<int>(std::lround(canvas.height)))};
}

MaskImage rasterize(const CanvasSpec& canvas, const std::vector<PackedBox>& packed,
                    const std::vector<BlobShape>& shapes, const std::vector<int>& class_ids) {
  if (shapes.size() != packed.size() || class_ids.size() != packed.size()) {
    throw std::invalid_argument("rasterize: packed boxes, shapes and class ids must be index-aligned");
  }
  const auto [width, height] = mask_dimensions(canvas);
  MaskImage mask(width, height);

  std::vector<Point2> poly;
  std::vector<double> xs;
  for (std::size_t k = 0; k < packed.size(); ++k) {
    const AxisBox& rect = packed[k].rect;
    const BlobShape& shape = shapes[k];
    if (shape.boundary.size() < 3 || !(rect.width > 0.0) || !(rect.height > 0.0)) continue;
    const auto cls = static_cast<std::uint16_t>(class_ids[k]);

    const AxisBox src = shape_bounds(shape);
    poly.clear();
    for (const Point2& p : shape.boundary) {
      const double u = src.width > 0.0 ? (p.x - src.x_min()) / src.width : 0.5;
      const double v = src.height > 0.0 ? (p.y - src.y_min()) / src.height : 0.5;
      poly.push_back({rect.x_min() + u * rect.width, rect.y_min() + v * rect.height});
    }

    const double rx0 = rect.x_min(), rx1 = rect.x_max(), ry0 = rect.y_min(), ry1 = rect.y_max();
    const int row0 = std::max(0, static_cast<int>(std::ceil(ry0 - 0.5)));
    const int row1 = std::min(height - 1, static_cast<int>(std::ceil(ry1 - 0.5)) - 1);
    for (int py = row0; py <= row1; ++py) {
      const double yc = py + 0.5;
      xs.clear();
      for (std::size_t e = 0; e < poly.size(); ++e) {
        const Point2 a = poly[e];
        const Point2 b = poly[(e + 1) % poly.size()];
        if ((a.y <= yc) != (b.y <= yc)) xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
      std::sort(xs.begin(), xs.end());
      for (std::size_t s = 0; s + 1 < xs.size(); s += 2) {
        const double lo = std::max(xs[s], rx0);
        const double hi = std::min(xs[s + 1], rx1);
        const int px0 = std::max(0, static_cast<int>(std::ceil(lo - 0.5)));
        const int px1 = std::min(width - 1, static_cast<int>(std::ceil(hi - 0.5)) - 1);
        for (int px = px0; px <= px1; ++px) mask.at(px, py) = cls;
      }
    }
  }
  return mask;
}

}  // namespace rarp
