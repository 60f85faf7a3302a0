#include "kernels_impl.hpp"

namespace cloiseg::simd::detail {

std::size_t radius_select_scalar(CoordsView pts, Point3 q, double r2,
                                 std::uint32_t* out) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < pts.size; ++k) {
    const double dx = pts.x[k] - q.x;
    const double dy = pts.y[k] - q.y;
    const double dz = pts.z[k] - q.z;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 <= r2) out[count++] = static_cast<std::uint32_t>(k);
  }
  return count;
}

std::size_t farthest_update_scalar(CoordsView pts, Point3 q, double* min_d2) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t k = 0; k < pts.size; ++k) {
    const double dx = pts.x[k] - q.x;
    const double dy = pts.y[k] - q.y;
    const double dz = pts.z[k] - q.z;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < min_d2[k]) min_d2[k] = d2;
    if (min_d2[k] > best_value) {
      best_value = min_d2[k];
      best = k;
    }
  }
  return best;
}

}  // namespace cloiseg::simd::detail
