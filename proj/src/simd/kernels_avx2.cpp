// Compiled with -mavx2. Only reached through the dispatch table after a CPU
// feature check.

#include <immintrin.h>

#include <bit>

#include "kernels_impl.hpp"

namespace cloiseg::simd::detail {

namespace {

inline __m256d squared_distance4(const double* x, const double* y,
                                 const double* z, __m256d qx, __m256d qy,
                                 __m256d qz) {
  const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x), qx);
  const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y), qy);
  const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(z), qz);
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                       _mm256_mul_pd(dz, dz));
}

}  // namespace

std::size_t radius_select_avx2(CoordsView pts, Point3 q, double r2,
                               std::uint32_t* out) {
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);
  const __m256d vr2 = _mm256_set1_pd(r2);
  std::size_t count = 0;
  std::size_t k = 0;
  for (; k + 4 <= pts.size; k += 4) {
    const __m256d d2 = squared_distance4(pts.x + k, pts.y + k, pts.z + k, qx, qy, qz);
    auto mask = static_cast<unsigned>(
        _mm256_movemask_pd(_mm256_cmp_pd(d2, vr2, _CMP_LE_OQ)));
    while (mask != 0) {
      const int lane = std::countr_zero(mask);
      out[count++] = static_cast<std::uint32_t>(k + static_cast<std::size_t>(lane));
      mask &= mask - 1;
    }
  }
  const CoordsView tail{pts.x + k, pts.y + k, pts.z + k, pts.size - k};
  const std::size_t tail_count = radius_select_scalar(tail, q, r2, out + count);
  for (std::size_t t = 0; t < tail_count; ++t) {
    out[count + t] += static_cast<std::uint32_t>(k);
  }
  return count + tail_count;
}

std::size_t farthest_update_avx2(CoordsView pts, Point3 q, double* min_d2) {
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);
  __m256d best_value = _mm256_set1_pd(-1.0);
  __m256i best_index = _mm256_set1_epi64x(0);
  __m256i index = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i step = _mm256_set1_epi64x(4);

  std::size_t k = 0;
  for (; k + 4 <= pts.size; k += 4) {
    const __m256d d2 = squared_distance4(pts.x + k, pts.y + k, pts.z + k, qx, qy, qz);
    const __m256d current = _mm256_loadu_pd(min_d2 + k);
    // Keep the stored value when it is not strictly larger, as the scalar
    // `if (d2 < min)` does.
    const __m256d updated =
        _mm256_blendv_pd(current, d2, _mm256_cmp_pd(d2, current, _CMP_LT_OQ));
    _mm256_storeu_pd(min_d2 + k, updated);
    const __m256d better = _mm256_cmp_pd(updated, best_value, _CMP_GT_OQ);
    best_value = _mm256_blendv_pd(best_value, updated, better);
    best_index = _mm256_castpd_si256(_mm256_blendv_pd(
        _mm256_castsi256_pd(best_index), _mm256_castsi256_pd(index), better));
    index = _mm256_add_epi64(index, step);
  }

  alignas(32) double values[4];
  alignas(32) long long indices[4];
  _mm256_store_pd(values, best_value);
  _mm256_store_si256(reinterpret_cast<__m256i*>(indices), best_index);
  double best = -1.0;
  std::size_t best_k = 0;
  for (int lane = 0; lane < 4; ++lane) {
    const auto lane_index = static_cast<std::size_t>(indices[lane]);
    if (values[lane] > best || (values[lane] == best && lane_index < best_k)) {
      best = values[lane];
      best_k = lane_index;
    }
  }
  for (; k < pts.size; ++k) {
    const double dx = pts.x[k] - q.x;
    const double dy = pts.y[k] - q.y;
    const double dz = pts.z[k] - q.z;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < min_d2[k]) min_d2[k] = d2;
    if (min_d2[k] > best) {
      best = min_d2[k];
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace cloiseg::simd::detail
