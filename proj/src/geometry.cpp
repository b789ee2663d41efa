#include "rarp/geometry.hpp"

#include <algorithm>

namespace rarp {

namespace {

enum class AxisRelation { FirstInside, SecondInside, Staggered };

AxisRelation relate(double a_lo, double a_hi, double b_lo, double b_hi) {
  if (a_lo >= b_lo && a_hi <= b_hi) return AxisRelation::FirstInside;
  if (b_lo >= a_lo && b_hi <= a_hi) return AxisRelation::SecondInside;
  return AxisRelation::Staggered;
}

}  // namespace

AxisBox AxisBox::from_corners(double x_min, double y_min, double x_max, double y_max) {
  return {{(x_min + x_max) * 0.5, (y_min + y_max) * 0.5}, x_max - x_min, y_max - y_min};
}

const char* to_string(OverlapTag tag) {
  switch (tag) {
    case OverlapTag::Disjoint: return "Disjoint";
    case OverlapTag::Touching: return "Touching";
    case OverlapTag::Containment: return "Containment";
    case OverlapTag::OneCornerInside: return "OneCornerInside";
    case OverlapTag::TwoCornersInside: return "TwoCornersInside";
    case OverlapTag::Cross: return "Cross";
  }
  return "?";
}

bool contains_strictly(const AxisBox& box, Point2 p) {
  return p.x > box.x_min() && p.x < box.x_max() && p.y > box.y_min() && p.y < box.y_max();
}

bool contains_closed(const AxisBox& box, Point2 p) {
  return p.x >= box.x_min() && p.x <= box.x_max() && p.y >= box.y_min() && p.y <= box.y_max();
}

bool box_within(const AxisBox& inner, const AxisBox& outer) {
  return inner.x_min() >= outer.x_min() && inner.x_max() <= outer.x_max() &&
         inner.y_min() >= outer.y_min() && inner.y_max() <= outer.y_max();
}

bool interiors_disjoint(const AxisBox& a, const AxisBox& b) {
  return !(axis_overlap(a.x_min(), a.x_max(), b.x_min(), b.x_max()) > 0.0 &&
           axis_overlap(a.y_min(), a.y_max(), b.y_min(), b.y_max()) > 0.0);
}

double penetration_depth(const AxisBox& a, const AxisBox& b) {
  const double ox = axis_overlap(a.x_min(), a.x_max(), b.x_min(), b.x_max());
  const double oy = axis_overlap(a.y_min(), a.y_max(), b.y_min(), b.y_max());
  if (ox > 0.0 && oy > 0.0) return std::min(ox, oy);
  return 0.0;
}

OverlapClass classify_overlap(const AxisBox& a, const AxisBox& b) {
  const double ax0 = a.x_min(), ax1 = a.x_max(), ay0 = a.y_min(), ay1 = a.y_max();
  const double bx0 = b.x_min(), bx1 = b.x_max(), by0 = b.y_min(), by1 = b.y_max();
  const double ox = axis_overlap(ax0, ax1, bx0, bx1);
  const double oy = axis_overlap(ay0, ay1, by0, by1);

  if (!(ox > 0.0 && oy > 0.0)) {
    if (ox >= 0.0 && oy >= 0.0) return {OverlapTag::Touching, OverlapRole::None};
    return {OverlapTag::Disjoint, OverlapRole::None};
  }

  const AxisRelation rx = relate(ax0, ax1, bx0, bx1);
  const AxisRelation ry = relate(ay0, ay1, by0, by1);
  // relate() prefers FirstInside on equal spans, so re-test the reverse
  // direction explicitly for containment.
  const bool b_in_a_x = bx0 >= ax0 && bx1 <= ax1;
  const bool b_in_a_y = by0 >= ay0 && by1 <= ay1;

  using R = AxisRelation;
  if (rx == R::FirstInside && ry == R::FirstInside) {
    return {OverlapTag::Containment, OverlapRole::FirstInSecond};
  }
  if (b_in_a_x && b_in_a_y) return {OverlapTag::Containment, OverlapRole::SecondInFirst};

  if ((rx == R::FirstInside && ry == R::SecondInside) ||
      (rx == R::SecondInside && ry == R::FirstInside)) {
    return {OverlapTag::Cross, OverlapRole::None};
  }
  if (rx == R::Staggered && ry == R::Staggered) {
    return {OverlapTag::OneCornerInside, OverlapRole::FirstInSecond};
  }
  if (rx == R::FirstInside || ry == R::FirstInside) {
    return {OverlapTag::TwoCornersInside, OverlapRole::FirstInSecond};
  }
  return {OverlapTag::TwoCornersInside, OverlapRole::SecondInFirst};
}

std::optional<AxisBox> intersect(const AxisBox& a, const AxisBox& b) {
  if (box_within(a, b)) return a;
  if (box_within(b, a)) return b;
  const double x0 = std::max(a.x_min(), b.x_min());
  const double x1 = std::min(a.x_max(), b.x_max());
  const double y0 = std::max(a.y_min(), b.y_min());
  const double y1 = std::min(a.y_max(), b.y_max());
  if (x1 < x0 || y1 < y0) return std::nullopt;
  return AxisBox::from_corners(x0, y0, x1, y1);
}

}  // namespace rarp
