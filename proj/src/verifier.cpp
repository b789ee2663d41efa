#include "rarp/verifier.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "rarp/json_text.hpp"
#include "rarp/simd/overlap_kernels.hpp"

namespace rarp {

namespace {

double overhang(const AxisBox& box, const CanvasSpec& canvas) {
  return std::max({0.0, -box.x_min(), box.x_max() - canvas.width, -box.y_min(), box.y_max() - canvas.height});
}

double corner_deviation(const AxisBox& a, const AxisBox& b) {
  return std::max({std::abs(a.x_min() - b.x_min()), std::abs(a.x_max() - b.x_max()),
                   std::abs(a.y_min() - b.y_min()), std::abs(a.y_max() - b.y_max())});
}

}  // namespace

VerificationReport verify(const Instance& instance, const ScaleSolution& solution,
                          const std::vector<PackedBox>& packed, bool allow_trim) {
  const std::size_t n = instance.items.size();
  if (solution.scales.size() != n || packed.size() != n) {
    throw std::invalid_argument("verify: instance, solution and packed boxes must be index-aligned");
  }
  VerificationReport report;
  report.input_violations = validate_instance(instance);
  report.objective = objective(instance, solution);

  std::vector<double> x0(n), x1(n), y0(n), y1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const AxisBox& r = packed[i].rect;
    x0[i] = r.x_min();
    x1[i] = r.x_max();
    y0[i] = r.y_min();
    y1[i] = r.y_max();
  }
  const simd::CornerColumns cols{x0, x1, y0, y1};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const simd::Corners q{x0[i], x1[i], y0[i], y1[i]};
    for (std::size_t j = simd::find_overlap(q, cols, i + 1, n, kVerifyTolerance); j < n;
         j = simd::find_overlap(q, cols, j + 1, n, kVerifyTolerance)) {
      report.overlap_violations.push_back(
          {static_cast<int>(i), static_cast<int>(j), penetration_depth(packed[i].rect, packed[j].rect)});
    }
  }

  const AxisBox canvas = instance.canvas.box();
  for (std::size_t i = 0; i < n; ++i) {
    const int idx = static_cast<int>(i);
    const double s = solution.scales[i];
    if (packed[i].item_id != instance.items[i].id || !(s > 0.0) || !std::isfinite(s)) {
      report.anchoring_violations.push_back({idx, std::numeric_limits<double>::infinity()});
      continue;
    }
    const AxisBox scaled = instance.items[i].box_at(s);
    const double rect_out = overhang(packed[i].rect, instance.canvas);
    const double scaled_out = overhang(scaled, instance.canvas);
    if (rect_out > kVerifyTolerance) {
      report.protrusion_violations.push_back({idx, rect_out});
    } else if (!allow_trim && scaled_out > kVerifyTolerance) {
      report.protrusion_violations.push_back({idx, scaled_out});
    }

    AxisBox expected = scaled;
    if (allow_trim && !box_within(scaled, canvas)) {
      expected = intersect(scaled, canvas).value_or(AxisBox{scaled.center, 0.0, 0.0});
    }
    const double offset = corner_deviation(packed[i].rect, expected);
    if (offset > kVerifyTolerance) report.anchoring_violations.push_back({idx, offset});
  }

  report.pass = report.violation_count() == 0;
  return report;
}

std::string serialize_report(const VerificationReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("pass").value(report.pass);
  w.key("overlap_violations").begin_array();
  for (const auto& v : report.overlap_violations) {
    w.begin_object().key("i").value(v.i).key("j").value(v.j).key("depth").value(v.depth).end_object();
  }
  w.end_array();
  w.key("protrusion_violations").begin_array();
  for (const auto& v : report.protrusion_violations) {
    w.begin_object().key("i").value(v.i).key("overhang").value(v.overhang).end_object();
  }
  w.end_array();
  w.key("anchoring_violations").begin_array();
  for (const auto& v : report.anchoring_violations) {
    w.begin_object().key("i").value(v.i).key("offset").value(v.offset).end_object();
  }
  w.end_array();
  w.key("input_violations").begin_array();
  for (const auto& v : report.input_violations) {
    w.begin_object();
    w.key("rule").value(to_string(v.rule));
    w.key("indices").begin_array();
    for (const int k : v.indices) w.value(k);
    w.end_array();
    w.key("detail").value(v.detail);
    w.end_object();
  }
  w.end_array();
  w.key("objective").begin_object();
  w.key("linear").value(report.objective.linear);
  w.key("covered_area").value(report.objective.covered_area);
  w.end_object();
  w.end_object();
  return w.str();
}

CollinearResiduals collinear_residuals(const Instance& instance, const ScaleSolution& solution) {
  if (instance.items.size() != 3 || solution.scales.size() != 3) {
    throw ShapeError("collinear residuals need exactly three items");
  }
  const auto& items = instance.items;
  if (!(items[0].anchor.y == items[1].anchor.y && items[1].anchor.y == items[2].anchor.y)) {
    throw ShapeError("anchors are not on one horizontal line");
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return items[a].anchor.x < items[b].anchor.x; });
  if (items[order[0]].anchor.x == items[order[1]].anchor.x || items[order[1]].anchor.x == items[order[2]].anchor.x) {
    throw ShapeError("anchors must be distinct");
  }
  const double b = items[order[0]].base_width, alpha = solution.scales[order[0]];
  const double d = items[order[1]].base_width, beta = solution.scales[order[1]];
  const double f = items[order[2]].base_width, gamma = solution.scales[order[2]];
  const double span = items[order[2]].anchor.x - items[order[0]].anchor.x;
  return {b * alpha * 0.5 + d * beta + f * gamma * 0.5 - span,
          instance.canvas.width - (b * alpha + d * beta + f * gamma)};
}

}  // namespace rarp
