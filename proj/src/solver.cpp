#include "rarp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "rarp/random.hpp"
#include "rarp/simd/overlap_kernels.hpp"

namespace rarp {

namespace {

constexpr double kUnassigned = std::numeric_limits<double>::quiet_NaN();

void log_event(SolveTrace* trace, TraceStep step, std::vector<int> items, std::vector<double> before,
               std::vector<double> after) {
  if (trace == nullptr) return;
  trace->events.push_back({step, std::move(items), std::move(before), std::move(after)});
}

// Corner columns of the scaled boxes, laid out in greedy order for the
// all-pairs overlap scan.
struct ScaledColumns {
  std::vector<double> x_min, x_max, y_min, y_max;

  explicit ScaledColumns(std::size_t n) : x_min(n), x_max(n), y_min(n), y_max(n) {}

  void set(std::size_t pos, const AxisBox& box) {
    x_min[pos] = box.x_min();
    x_max[pos] = box.x_max();
    y_min[pos] = box.y_min();
    y_max[pos] = box.y_max();
  }

  simd::Corners corners(std::size_t pos) const { return {x_min[pos], x_max[pos], y_min[pos], y_max[pos]}; }

  simd::CornerColumns view() const { return {x_min, x_max, y_min, y_max}; }
};

}  // namespace

const char* to_string(TraceStep step) {
  switch (step) {
    case TraceStep::Singleton: return "singleton";
    case TraceStep::PairScale: return "pair_scale";
    case TraceStep::Clip: return "clip";
    case TraceStep::PostShrink: return "post_shrink";
    case TraceStep::Downscale: return "downscale";
  }
  return "?";
}

std::vector<double> replay(const SolveTrace& trace, std::size_t n) {
  std::vector<double> scales(n, kUnassigned);
  for (const TraceEvent& e : trace.events) {
    for (std::size_t k = 0; k < e.items.size(); ++k) scales.at(static_cast<std::size_t>(e.items[k])) = e.after[k];
  }
  return scales;
}

double pair_scale(const ItemSpec& a, const ItemSpec& b) {
  const double dx = std::abs(a.anchor.x - b.anchor.x);
  const double dy = std::abs(a.anchor.y - b.anchor.y);
  if (dx == 0.0 && dy == 0.0) {
    throw CoincidentAnchorError("items " + std::to_string(a.id) + " and " + std::to_string(b.id) +
                                " share an anchor");
  }
  const double alpha = dx / ((a.base_width + b.base_width) * 0.5);
  const double beta = dy / ((a.base_height + b.base_height) * 0.5);
  return std::max(alpha, beta);
}

double pair_shrink(const AxisBox& a, const AxisBox& b) {
  const double dx = std::abs(a.center.x - b.center.x);
  const double dy = std::abs(a.center.y - b.center.y);
  if (dx == 0.0 && dy == 0.0) throw DegenerateOverlapError("overlapping boxes share a center");
  if (interiors_disjoint(a, b)) throw std::invalid_argument("pair_shrink requires overlapping boxes");
  const double kx = dx / ((a.width + b.width) * 0.5);
  const double ky = dy / ((a.height + b.height) * 0.5);
  return std::max(kx, ky);
}

double boundary_fit_scale(const CanvasSpec& canvas, const ItemSpec& item) {
  const Point2 c = item.anchor;
  const double sx = 2.0 * std::min(c.x, canvas.width - c.x) / item.base_width;
  const double sy = 2.0 * std::min(c.y, canvas.height - c.y) / item.base_height;
  return std::min(sx, sy);
}

std::vector<int> greedy_order(const Instance& instance) {
  std::vector<int> order(instance.items.size());
  std::iota(order.begin(), order.end(), 0);
  const bool x_major = instance.canvas.x_is_major();
  const auto key = [&](int i) {
    const ItemSpec& it = instance.items[static_cast<std::size_t>(i)];
    const double major = x_major ? it.anchor.x : it.anchor.y;
    const double minor = x_major ? it.anchor.y : it.anchor.x;
    return std::tuple(major, minor, it.id);
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  return order;
}

SolveResult greedy_solve(const Instance& instance, const SolveOptions& options) {
  const std::size_t n = instance.items.size();
  const auto& items = instance.items;
  SolveResult result;
  SolveTrace& trace = result.trace;
  ScaleSolution& sol = result.solution;
  sol.scales.assign(n, kUnassigned);
  sol.flags.assign(n, {});
  trace.order = greedy_order(instance);

  if (n == 1) {
    const double s = options.boundary_cap_singletons ? boundary_fit_scale(instance.canvas, items[0]) : 1.0;
    if (!(s >= kMinScale)) throw DegenerateOverlapError("singleton scale collapses to zero");
    sol.scales[0] = s;
    log_event(&trace, TraceStep::Singleton, {0}, {kUnassigned}, {s});
  }

  for (std::size_t p = 0; p + 1 < n; ++p) {
    const auto t = static_cast<std::size_t>(trace.order[p]);
    const auto u = static_cast<std::size_t>(trace.order[p + 1]);
    double s = pair_scale(items[t], items[u]);
    if (s < kMinScale) {
      throw DegenerateOverlapError("pair scale below floor for items " + std::to_string(t) + ", " +
                                   std::to_string(u));
    }
    const double prev_t = sol.scales[t];
    const double prev_u = sol.scales[u];
    TraceStep step = TraceStep::PairScale;
    // An item shrunk by its previous pair must not be re-expanded.
    if (!std::isnan(prev_t) && prev_t < 1.0 && s > 1.0) {
      s = 1.0;
      sol.flags[u].clipped = true;
      step = TraceStep::Clip;
    }
    sol.scales[u] = s;
    sol.scales[t] = std::isnan(prev_t) ? s : std::min(prev_t, s);
    log_event(&trace, step, {static_cast<int>(t), static_cast<int>(u)}, {prev_t, prev_u},
              {sol.scales[t], sol.scales[u]});
  }

  sol = post_process(instance, std::move(sol), options.post_process_pass_cap.value_or(0), &trace);
  if (options.enable_random_downscale) sol = random_downscale(std::move(sol), options, &trace);
  return result;
}

ScaleSolution post_process(const Instance& instance, ScaleSolution solution, int pass_cap, SolveTrace* trace) {
  const std::size_t n = instance.items.size();
  if (solution.scales.size() != n) throw std::invalid_argument("solution size does not match instance");
  solution.flags.resize(n);
  for (const double s : solution.scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("post_process requires assigned positive scales");
  }
  if (pass_cap <= 0) pass_cap = static_cast<int>(n) + 2;

  const auto& items = instance.items;
  const std::vector<int> order = trace != nullptr && trace->order.size() == n ? trace->order : greedy_order(instance);
  ScaledColumns cols(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto i = static_cast<std::size_t>(order[pos]);
    cols.set(pos, items[i].box_at(solution.scales[i]));
  }

  // Each pass measures every overlapping pair against the scales the pass
  // started with; an item then takes the smallest touching factor among its
  // pairs. Shrinking pair by pair instead would multiply the factors of all
  // partners together and can flatten a small box caught between large ones.
  std::vector<double> factor(n);
  for (int pass = 1; pass <= pass_cap; ++pass) {
    std::fill(factor.begin(), factor.end(), 1.0);
    bool changed = false;
    for (std::size_t a = 0; a + 1 < n; ++a) {
      const auto i = static_cast<std::size_t>(order[a]);
      for (std::size_t b = simd::find_overlap(cols.corners(a), cols.view(), a + 1, n, 0.0); b < n;
           b = simd::find_overlap(cols.corners(a), cols.view(), b + 1, n, 0.0)) {
        const auto j = static_cast<std::size_t>(order[b]);
        const double si = solution.scales[i];
        const double sj = solution.scales[j];
        double k = pair_shrink(items[i].box_at(si), items[j].box_at(sj));
        // Rounding can leave a sub-ulp overlap at the exact touching factor.
        for (int guard = 0; guard < 64 && !interiors_disjoint(items[i].box_at(si * k), items[j].box_at(sj * k)); ++guard) {
          k = std::nextafter(k, 0.0);
        }
        factor[i] = std::min(factor[i], k);
        factor[j] = std::min(factor[j], k);
        changed = true;
      }
    }
    if (trace != nullptr) trace->post_process_passes = pass;
    if (!changed) return solution;

    for (std::size_t pos = 0; pos < n; ++pos) {
      const auto i = static_cast<std::size_t>(order[pos]);
      if (factor[i] >= 1.0) continue;
      const double before = solution.scales[i];
      const double after = before * factor[i];
      if (after < kMinScale) {
        throw DegenerateOverlapError("post-processing collapsed item " + std::to_string(i));
      }
      solution.scales[i] = after;
      solution.flags[i].post_shrunk = true;
      cols.set(pos, items[i].box_at(after));
      log_event(trace, TraceStep::PostShrink, {static_cast<int>(i)}, {before}, {after});
    }
  }
  throw PassCapExceeded("overlaps remain after " + std::to_string(pass_cap) + " post-processing passes");
}

ScaleSolution random_downscale(ScaleSolution solution, const SolveOptions& options, SolveTrace* trace) {
  const double lo = options.downscale_lo;
  const double hi = options.downscale_hi;
  if (!(lo > 0.0 && lo <= hi && hi <= 1.0)) throw std::invalid_argument("downscale range must satisfy 0 < lo <= hi <= 1");
  solution.flags.resize(solution.scales.size());
  Rng rng(mix_seed(options.seed, 0x5ca1e));
  for (std::size_t i = 0; i < solution.scales.size(); ++i) {
    const double before = solution.scales[i];
    const double factor = rng.uniform(lo, hi);
    solution.scales[i] = std::max(before * factor, kMinScale);
    solution.flags[i].downscaled = true;
    log_event(trace, TraceStep::Downscale, {static_cast<int>(i)}, {before}, {solution.scales[i]});
  }
  return solution;
}

std::vector<PackedBox> trim(const Instance& instance, const ScaleSolution& solution) {
  if (solution.scales.size() != instance.items.size()) throw std::invalid_argument("solution size does not match instance");
  const AxisBox canvas = instance.canvas.box();
  std::vector<PackedBox> out;
  out.reserve(solution.scales.size());
  for (std::size_t i = 0; i < solution.scales.size(); ++i) {
    const AxisBox scaled = instance.items[i].box_at(solution.scales[i]);
    PackedBox pb{instance.items[i].id, scaled, false};
    if (!box_within(scaled, canvas)) {
      pb.trimmed = true;
      // The anchor is inside the canvas, so the intersection is never empty.
      pb.rect = intersect(scaled, canvas).value_or(AxisBox{scaled.center, 0.0, 0.0});
    }
    out.push_back(pb);
  }
  return out;
}

Objective objective(const Instance& instance, const ScaleSolution& solution) {
  if (solution.scales.size() != instance.items.size()) throw std::invalid_argument("solution size does not match instance");
  Objective obj;
  for (std::size_t i = 0; i < solution.scales.size(); ++i) {
    const double a = solution.scales[i];
    const double area = instance.items[i].base_width * instance.items[i].base_height;
    obj.linear += a * area;
    obj.covered_area += a * a * area;
  }
  return obj;
}

}  // namespace rarp
