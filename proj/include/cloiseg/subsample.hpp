#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cloiseg/point_cloud.hpp"

namespace cloiseg {

/// Farthest-point order starting from `first`: each next index maximizes the
/// minimum distance to those already chosen (lowest index on ties). Returns k
/// indices in selection order. Requires 1 <= k <= N and first < N.
std::vector<std::size_t> farthest_point_indices(std::span<const Point3> positions,
                                                std::size_t k, std::size_t first);

/// First index drawn uniformly from the seeded counter stream.
std::size_t farthest_point_seed_index(std::size_t n, std::uint64_t seed);

/// k farthest-point samples of the cloud, returned in original point order
/// with labels carried through. Throws std::invalid_argument unless
/// 1 <= k <= N.
LabeledPointCloud farthest_point_subsample(const LabeledPointCloud& cloud,
                                           std::size_t k, std::uint64_t seed);

}  // namespace cloiseg
