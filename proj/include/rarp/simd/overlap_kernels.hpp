#pragma once

#include <cstddef>
#include <span>

namespace rarp::simd {

// Corner form of one box, the query side of the overlap scan.
struct Corners {
  double x_min;
  double x_max;
  double y_min;
  double y_max;
};

// Structure-of-arrays view over a set of boxes in corner form.
struct CornerColumns {
  std::span<const double> x_min;
  std::span<const double> x_max;
  std::span<const double> y_min;
  std::span<const double> y_max;

  std::size_t size() const { return x_min.size(); }
};

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

// Returns the first index j in [begin, end) whose open-interval overlap with
// `query` exceeds `tol` on both axes, or `end` when there is none.
// With tol == 0 this is exactly the interior-overlap predicate of
// rarp::interiors_disjoint.
std::size_t find_overlap_scalar(const Corners& query, const CornerColumns& cols, std::size_t begin,
                                std::size_t end, double tol);
#if defined(RARP_WITH_AVX2)
std::size_t find_overlap_avx2(const Corners& query, const CornerColumns& cols, std::size_t begin,
                              std::size_t end, double tol);
#endif

bool isa_available(Isa isa);

// The ISA selected at startup: AVX2 when the CPU supports it and the
// RARP_SIMD environment variable is not "scalar".
Isa active_isa();

// Overrides the runtime selection. Throws std::invalid_argument when the ISA
// is not available on this machine/build.
void force_isa(Isa isa);

std::size_t find_overlap(const Corners& query, const CornerColumns& cols, std::size_t begin,
                         std::size_t end, double tol);

}  // namespace rarp::simd
