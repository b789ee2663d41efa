#include <immintrin.h>

#include "rarp/simd/overlap_kernels.hpp"

namespace rarp::simd {

std::size_t find_overlap_avx2(const Corners& q, const CornerColumns& cols, std::size_t begin,
                              std::size_t end, double tol) {
  const __m256d qx0 = _mm256_set1_pd(q.x_min);
  const __m256d qx1 = _mm256_set1_pd(q.x_max);
  const __m256d qy0 = _mm256_set1_pd(q.y_min);
  const __m256d qy1 = _mm256_set1_pd(q.y_max);
  const __m256d vtol = _mm256_set1_pd(tol);

  const double* bx0 = cols.x_min.data();
  const double* bx1 = cols.x_max.data();
  const double* by0 = cols.y_min.data();
  const double* by1 = cols.y_max.data();

  std::size_t j = begin;
  for (; j + 4 <= end; j += 4) {
    // min/max argument order mirrors the scalar axis_overlap so equal
    // operands resolve identically.
    const __m256d ox = _mm256_sub_pd(_mm256_min_pd(qx1, _mm256_loadu_pd(bx1 + j)),
                                     _mm256_max_pd(qx0, _mm256_loadu_pd(bx0 + j)));
    const __m256d oy = _mm256_sub_pd(_mm256_min_pd(qy1, _mm256_loadu_pd(by1 + j)),
                                     _mm256_max_pd(qy0, _mm256_loadu_pd(by0 + j)));
    const __m256d hit = _mm256_and_pd(_mm256_cmp_pd(ox, vtol, _CMP_GT_OQ),
                                      _mm256_cmp_pd(oy, vtol, _CMP_GT_OQ));
    const int mask = _mm256_movemask_pd(hit);
    if (mask != 0) return j + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; j < end; ++j) {
    const double hx = q.x_max < bx1[j] ? q.x_max : bx1[j];
    const double lx = q.x_min > bx0[j] ? q.x_min : bx0[j];
    const double hy = q.y_max < by1[j] ? q.y_max : by1[j];
    const double ly = q.y_min > by0[j] ? q.y_min : by0[j];
    if (hx - lx > tol && hy - ly > tol) return j;
  }
  return end;
}

}  // namespace rarp::simd
