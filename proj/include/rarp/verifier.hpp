#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rarp/instance.hpp"
#include "rarp/solver.hpp"

namespace rarp {

// Geometric slack (px) below which overlaps, overhangs and anchor offsets are
// treated as rounding noise.
inline constexpr double kVerifyTolerance = 1e-9;

struct OverlapViolation {
  int i;
  int j;
  double depth;  // minimum axis translation that separates the pair
};

struct ProtrusionViolation {
  int i;
  double overhang;
};

struct AnchoringViolation {
  int i;
  double offset;  // largest corner deviation from the expected anchored rect
};

struct VerificationReport {
  std::vector<OverlapViolation> overlap_violations;
  std::vector<ProtrusionViolation> protrusion_violations;
  std::vector<AnchoringViolation> anchoring_violations;
  std::vector<Violation> input_violations;
  Objective objective;
  bool pass = false;

  std::size_t violation_count() const {
    return overlap_violations.size() + protrusion_violations.size() + anchoring_violations.size() +
           input_violations.size();
  }
};

// Checks the packed rects against every constraint: pairwise interior
// disjointness, containment in the canvas, anchoring (untrimmed rects must be
// the scaled box on the anchor; with allow_trim a protruding box must equal
// its intersection with the canvas) and the instance's input constraints.
// Without allow_trim any protrusion of a scaled box is a violation.
VerificationReport verify(const Instance& instance, const ScaleSolution& solution,
                          const std::vector<PackedBox>& packed, bool allow_trim = true);

std::string serialize_report(const VerificationReport& report);

enum class OracleObjective { Linear, CoveredArea };

struct OracleResult {
  std::vector<double> best_scales;
  double best_objective = 0.0;
  double grid_resolution = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t feasible_points = 0;

  bool found() const { return feasible_points > 0; }
};

inline constexpr std::size_t kOracleMaxItems = 4;

// Exhaustive search over scale vectors in (0, scale_upper]^n with strict
// containment (no trimming). The first n-1 scales walk the grid
// {resolution, 2*resolution, ...}; for each grid point the last scale is set
// to its exact feasible maximum. Throws InstanceTooLarge for n > 4.
OracleResult oracle_max(const Instance& instance, double resolution, double scale_upper,
                        OracleObjective mode = OracleObjective::Linear, int jobs = 1);

// Touching equation and width budget of the degenerate three-box layout with
// anchors on one horizontal line (left to right widths b, d, f, scales
// alpha, beta, gamma):
//   residual = b*alpha/2 + d*beta + f*gamma/2 - (c3 - c1)
//   slack    = W - (b*alpha + d*beta + f*gamma)
struct CollinearResiduals {
  double touching_residual;
  double width_slack;
};

CollinearResiduals collinear_residuals(const Instance& instance, const ScaleSolution& solution);

}  // namespace rarp
