#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rarp/simd/overlap_kernels.hpp"

namespace rarp::simd {

namespace {

Isa detect() {
  const char* env = std::getenv("RARP_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return Isa::Scalar;
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  return Isa::Scalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(RARP_WITH_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument(std::string("ISA not available: ") + to_string(isa));
  selected().store(isa, std::memory_order_relaxed);
}

std::size_t find_overlap(const Corners& query, const CornerColumns& cols, std::size_t begin,
                         std::size_t end, double tol) {
#if defined(RARP_WITH_AVX2)
  if (active_isa() == Isa::Avx2) return find_overlap_avx2(query, cols, begin, end, tol);
#endif
  return find_overlap_scalar(query, cols, begin, end, tol);
}

}  // namespace rarp::simd
