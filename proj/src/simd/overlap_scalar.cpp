#include "rarp/simd/overlap_kernels.hpp"

#include "rarp/geometry.hpp"

namespace rarp::simd {

std::size_t find_overlap_scalar(const Corners& q, const CornerColumns& cols, std::size_t begin,
                                std::size_t end, double tol) {
  for (std::size_t j = begin; j < end; ++j) {
    const double ox = axis_overlap(q.x_min, q.x_max, cols.x_min[j], cols.x_max[j]);
    const double oy = axis_overlap(q.y_min, q.y_max, cols.y_min[j], cols.y_max[j]);
    if (ox > tol && oy > tol) return j;
  }
  return end;
}

}  // namespace rarp::simd
