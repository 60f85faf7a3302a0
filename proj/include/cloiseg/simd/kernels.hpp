#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cloiseg/types.hpp"

// Data-parallel distance kernels. Every variant computes squared distances
// as (dx*dx + dy*dy) + dz*dz with no fused multiply-add, so all variants
// return bit-identical results and callers may switch freely between them.

namespace cloiseg::simd {

/// Structure-of-arrays coordinates.
struct CoordsView {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* z = nullptr;
  std::size_t size = 0;
};

/// Writes the ascending offsets k with |p_k - q|^2 <= r2 to `out` (capacity
/// >= size) and returns how many were written.
using RadiusSelectFn = std::size_t (*)(CoordsView pts, Point3 q, double r2,
                                       std::uint32_t* out);

/// min_d2[k] = min(min_d2[k], |p_k - q|^2) for every k, then returns the
/// offset of the largest min_d2 (lowest offset among ties). size > 0.
using FarthestUpdateFn = std::size_t (*)(CoordsView pts, Point3 q,
                                         double* min_d2);

enum class SimdLevel { scalar, avx2 };

struct KernelTable {
  SimdLevel level;
  std::string_view name;
  RadiusSelectFn radius_select;
  FarthestUpdateFn farthest_update;
};

const KernelTable& scalar_kernels();

/// The AVX2 table when it is compiled in and the CPU supports it.
const KernelTable* avx2_kernels();

/// Best table for this CPU. CLOI_SEG_SIMD=scalar in the environment forces the
/// scalar reference.
const KernelTable& active_kernels();

/// Overrides the runtime choice; a level the CPU lacks falls back to scalar.
void set_active_level(SimdLevel level);

std::optional<SimdLevel> parse_level(std::string_view name);

}  // namespace cloiseg::simd
