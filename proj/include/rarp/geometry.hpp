#pragma once

#include <optional>

namespace rarp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Closed interval [lo, hi] on one axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
};

// Axis-aligned box stored as center + extent. Corner form is derived on
// demand; every overlap test in the library goes through these accessors so
// that the solver, the SIMD kernels and the verifier agree bit-for-bit.
struct AxisBox {
  Point2 center;
  double width = 0.0;
  double height = 0.0;

  static AxisBox from_corners(double x_min, double y_min, double x_max, double y_max);

  double x_min() const { return center.x - width * 0.5; }
  double x_max() const { return center.x + width * 0.5; }
  double y_min() const { return center.y - height * 0.5; }
  double y_max() const { return center.y + height * 0.5; }
  Interval x_span() const { return {x_min(), x_max()}; }
  Interval y_span() const { return {y_min(), y_max()}; }
  double area() const { return width * height; }

  AxisBox scaled(double factor) const { return {center, width * factor, height * factor}; }

  friend bool operator==(const AxisBox&, const AxisBox&) = default;
};

enum class OverlapTag {
  Disjoint,
  Touching,
  Containment,
  OneCornerInside,
  TwoCornersInside,
  Cross,
};

const char* to_string(OverlapTag tag);

// Which box plays the active role for the asymmetric tags.
enum class OverlapRole {
  None,
  FirstInSecond,  // a is contained in b / a's corners lie inside b
  SecondInFirst,  // b is contained in a / b's corners lie inside a
};

struct OverlapClass {
  OverlapTag tag = OverlapTag::Disjoint;
  OverlapRole role = OverlapRole::None;

  bool overlapping() const { return tag != OverlapTag::Disjoint && tag != OverlapTag::Touching; }
};

// Length of the open-interval overlap on one axis; <= 0 means no interior overlap.
inline double axis_overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
  const double hi = a_hi < b_hi ? a_hi : b_hi;
  const double lo = a_lo > b_lo ? a_lo : b_lo;
  return hi - lo;
}

// Strictly inside the open box.
bool contains_strictly(const AxisBox& box, Point2 p);

// Inside the closed box.
bool contains_closed(const AxisBox& box, Point2 p);

// True when `inner` lies within the closed region of `outer`.
bool box_within(const AxisBox& inner, const AxisBox& outer);

// Touching boundaries count as disjoint. Zero-width boxes have an empty
// interior and are therefore always disjoint from everything.
bool interiors_disjoint(const AxisBox& a, const AxisBox& b);

// Minimum axis translation that removes an interior overlap; 0 when disjoint.
double penetration_depth(const AxisBox& a, const AxisBox& b);

OverlapClass classify_overlap(const AxisBox& a, const AxisBox& b);

// Closed-interval intersection; nullopt when the boxes are separated on an axis.
std::optional<AxisBox> intersect(const AxisBox& a, const AxisBox& b);

}  // namespace rarp
