#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cloiseg/point_cloud.hpp"
#include "cloiseg/radius_index.hpp"

namespace cloiseg {

/// One byte per point; nonzero marks a boundary point.
using BoundaryFlags = std::vector<std::uint8_t>;

struct BoundaryParams {
  /// Neighborhood radius in meters.
  double radius = 0.04;

  void validate() const;
};

/// A point is a class boundary iff some other point within `radius` has a
/// different class label. `index` must be built over `cloud.positions()`.
BoundaryFlags detect_class_boundaries(const LabeledPointCloud& cloud,
                                      const RadiusIndex& index,
                                      const BoundaryParams& params,
                                      std::size_t threads = 0);

/// Same rule over ground-truth instance ids. Throws std::invalid_argument
/// when the cloud has no ground truth.
BoundaryFlags detect_gt_instance_boundaries(const LabeledPointCloud& cloud,
                                            const RadiusIndex& index,
                                            const BoundaryParams& params,
                                            std::size_t threads = 0);

struct BoundaryStats {
  std::size_t boundary = 0;
  std::size_t interior = 0;
  /// boundary / N; 0 for an empty cloud.
  double ratio = 0.0;
};

BoundaryStats boundary_stats(std::span<const std::uint8_t> flags);

}  // namespace cloiseg
