#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rarp/geometry.hpp"
#include "rarp/instance.hpp"

namespace rarp {

// Scales below this are treated as a collapsed box.
inline constexpr double kMinScale = 1e-9;

struct ItemFlags {
  bool clipped = false;
  bool post_shrunk = false;
  bool downscaled = false;

  friend bool operator==(const ItemFlags&, const ItemFlags&) = default;
};

// Index-aligned with Instance::items.
struct ScaleSolution {
  std::vector<double> scales;
  std::vector<ItemFlags> flags;

  std::size_t size() const { return scales.size(); }

  friend bool operator==(const ScaleSolution&, const ScaleSolution&) = default;
};

// Final rectangle of one item after trimming to the canvas.
struct PackedBox {
  int item_id = 0;
  AxisBox rect;
  bool trimmed = false;

  friend bool operator==(const PackedBox&, const PackedBox&) = default;
};

struct SolveOptions {
  bool enable_random_downscale = false;
  double downscale_lo = 0.3;
  double downscale_hi = 1.0;
  std::uint64_t seed = 0;
  // Fixed-point pass limit for post_process; nullopt means n + 2.
  std::optional<int> post_process_pass_cap;
  bool boundary_cap_singletons = true;
};

enum class TraceStep { Singleton, PairScale, Clip, PostShrink, Downscale };

const char* to_string(TraceStep step);

struct TraceEvent {
  TraceStep step;
  std::vector<int> items;
  std::vector<double> before;  // NaN for a scale not yet assigned
  std::vector<double> after;
};

struct SolveTrace {
  std::vector<int> order;  // greedy processing order
  std::vector<TraceEvent> events;
  int post_process_passes = 0;
};

// Re-applies every event in order to an all-NaN scale vector.
std::vector<double> replay(const SolveTrace& trace, std::size_t n);

struct SolveResult {
  ScaleSolution solution;
  SolveTrace trace;
};

// Largest common scale at which two anchored items are interior-disjoint:
// max(|dx| / ((w_a + w_b) / 2), |dy| / ((h_a + h_b) / 2)).
double pair_scale(const ItemSpec& a, const ItemSpec& b);

// Common factor k in (0, 1) that shrinks two overlapping boxes (about their
// centers) until they touch on the less constraining axis.
double pair_shrink(const AxisBox& a, const AxisBox& b);

// Largest scale keeping the item inside the canvas on all four sides.
double boundary_fit_scale(const CanvasSpec& canvas, const ItemSpec& item);

// Items sorted along the canvas major axis; ties by minor axis, then id.
std::vector<int> greedy_order(const Instance& instance);

// The full pipeline: sorted pairwise scaling with clipping, post_process and
// (optionally) random_downscale. Deterministic in (instance, options).
SolveResult greedy_solve(const Instance& instance, const SolveOptions& options = {});

// All-pairs overlap repair. Within a pass every overlapping pair gets its
// touching factor from the scales at the start of the pass and each item is
// multiplied by the smallest factor among its pairs, so binding pairs end up
// touching; scales never increase. pass_cap <= 0 selects n + 2. Throws
// PassCapExceeded when a pass still finds an overlap after pass_cap passes.
ScaleSolution post_process(const Instance& instance, ScaleSolution solution, int pass_cap = 0,
                           SolveTrace* trace = nullptr);

ScaleSolution random_downscale(ScaleSolution solution, const SolveOptions& options,
                               SolveTrace* trace = nullptr);

std::vector<PackedBox> trim(const Instance& instance, const ScaleSolution& solution);

struct Objective {
  double linear = 0.0;        // sum alpha_i * w_i * h_i
  double covered_area = 0.0;  // sum alpha_i^2 * w_i * h_i
};

Objective objective(const Instance& instance, const ScaleSolution& solution);

// Solution file: scales, flags, packed rects and objective.
struct SolutionFile {
  ScaleSolution solution;
  std::vector<PackedBox> packed;
  Objective objective;
};

SolutionFile make_solution_file(const Instance& instance, const ScaleSolution& solution);
std::string serialize_solution(const SolutionFile& file);
SolutionFile parse_solution(const std::string& text, const std::string& source = "solution");
SolutionFile read_solution(const std::string& path);
void write_solution(const SolutionFile& file, const std::string& path);

}  // namespace rarp
