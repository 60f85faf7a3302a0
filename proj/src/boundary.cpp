#include "cloiseg/boundary.hpp"

#include <stdexcept>

#include "cloiseg/parallel.hpp"

namespace cloiseg {

namespace {

template <class Key>
BoundaryFlags flag_mixed_neighborhoods(const RadiusIndex& index,
                                       std::span<const Key> keys, double radius,
                                       std::size_t threads) {
  if (index.size() != keys.size()) {
    throw std::invalid_argument("index was not built over this cloud");
  }
  BoundaryFlags flags(keys.size(), 0);
  parallel_for(keys.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> neighbors;
    for (std::size_t i = begin; i < end; ++i) {
      index.radius_query(i, radius, neighbors);
      for (auto j : neighbors) {
        if (keys[j] != keys[i]) {
          flags[i] = 1;
          break;
        }
      }
    }
  });
  return flags;
}

}  // namespace

void BoundaryParams::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("boundary radius must be positive");
}

BoundaryFlags detect_class_boundaries(const LabeledPointCloud& cloud,
                                      const RadiusIndex& index,
                                      const BoundaryParams& params,
                                      std::size_t threads) {
  params.validate();
  const auto labels = cloud.labels();
  return flag_mixed_neighborhoods<ClassLabel>(index, labels, params.radius, threads);
}

BoundaryFlags detect_gt_instance_boundaries(const LabeledPointCloud& cloud,
                                            const RadiusIndex& index,
                                            const BoundaryParams& params,
                                            std::size_t threads) {
  params.validate();
  if (!cloud.has_ground_truth()) {
    throw std::invalid_argument("ground-truth instance ids are required");
  }
  const auto ids = cloud.gt_instances();
  return flag_mixed_neighborhoods<InstanceId>(index, ids, params.radius, threads);
}

BoundaryStats boundary_stats(std::span<const std::uint8_t> flags) {
  BoundaryStats stats;
  for (auto f : flags) {
    if (f != 0) {
      ++stats.boundary;
    } else {
      ++stats.interior;
    }
  }
  if (!flags.empty()) {
    stats.ratio = static_cast<double>(stats.boundary) / static_cast<double>(flags.size());
  }
  return stats;
}

}  // namespace cloiseg
