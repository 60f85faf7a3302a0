#pragma once

#include "cloiseg/simd/kernels.hpp"

namespace cloiseg::simd::detail {

std::size_t radius_select_scalar(CoordsView pts, Point3 q, double r2,
                                 std::uint32_t* out);
std::size_t farthest_update_scalar(CoordsView pts, Point3 q, double* min_d2);

#if defined(CLOISEG_HAVE_AVX2)
std::size_t radius_select_avx2(CoordsView pts, Point3 q, double r2,
                               std::uint32_t* out);
std::size_t farthest_update_avx2(CoordsView pts, Point3 q, double* min_d2);
#endif

}  // namespace cloiseg::simd::detail
