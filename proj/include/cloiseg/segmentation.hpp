#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cloiseg/boundary.hpp"
#include "cloiseg/disjoint_set.hpp"
#include "cloiseg/parallel.hpp"
#include "cloiseg/point_cloud.hpp"
#include "cloiseg/radius_index.hpp"

namespace cloiseg {

struct SegmentationParams {
  /// Link radius in meters.
  double epsilon = 0.04;
  /// Minimum instance size in points.
  std::size_t mu = 20;
  /// Class-boundary radius; epsilon when unset.
  std::optional<double> boundary_radius;

  /// Boundary points join an instance only within this multiple of epsilon.
  static constexpr double kReattachFactor = 3.0;

  double effective_boundary_radius() const {
    return boundary_radius.value_or(epsilon);
  }
  void validate() const;
};

/// Partition of point indices into instances plus NOISE, in canonical form:
/// instances are numbered by ascending smallest member and list their members
/// in ascending order.
struct InstanceLabeling {
  std::vector<InstanceId> assignment;
  std::vector<std::vector<std::size_t>> instances;
  std::vector<ClassLabel> instance_class;

  std::size_t instance_count() const { return instances.size(); }
  std::size_t point_count() const { return assignment.size(); }

  /// Builds the canonical labeling from arbitrary per-point ids (negative =
  /// NOISE). Throws std::invalid_argument when an instance mixes classes.
  static InstanceLabeling from_assignment(std::span<const InstanceId> ids,
                                          std::span<const ClassLabel> labels);

  friend bool operator==(const InstanceLabeling&, const InstanceLabeling&) = default;
};

InstanceLabeling ground_truth_labeling(const LabeledPointCloud& cloud);
InstanceLabeling predicted_labeling(const LabeledPointCloud& cloud);

/// Connected components of the graph over `subset` whose edges join points
/// within `epsilon` (closed ball) for which `linked(i, j)` holds. `linked`
/// must be symmetric and safe to call concurrently. Points outside the subset
/// are ignored. Components are ordered by smallest member; members ascend.
template <class EdgePredicate>
std::vector<std::vector<std::size_t>> connected_components(
    std::span<const std::size_t> subset, const RadiusIndex& index,
    double epsilon, EdgePredicate&& linked, std::size_t threads = 0) {
  std::vector<std::uint8_t> member(index.size(), 0);
  for (auto i : subset) member[i] = 1;

  DisjointSet sets(index.size());
  // Neighbor scans run in parallel per block; unions are applied serially, so
  // the resulting partition does not depend on scheduling.
  constexpr std::size_t kBlock = 1 << 15;
  std::vector<std::vector<std::size_t>> edges(std::min(kBlock, subset.size()));
  for (std::size_t base = 0; base < subset.size(); base += kBlock) {
    const std::size_t count = std::min(kBlock, subset.size() - base);
    parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
      std::vector<std::size_t> neighbors;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t i = subset[base + k];
        auto& out = edges[k];
        out.clear();
        index.radius_query(i, epsilon, neighbors);
        for (auto j : neighbors) {
          if (j > i && member[j] && linked(i, j)) out.push_back(j);
        }
      }
    }, 256);
    for (std::size_t k = 0; k < count; ++k) {
      for (auto j : edges[k]) sets.unite(subset[base + k], j);
    }
  }

  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> root_to_component(index.size(), SIZE_MAX);
  std::vector<std::vector<std::size_t>> components;
  for (auto i : sorted) {
    const auto root = sets.find(i);
    if (root_to_component[root] == SIZE_MAX) {
      root_to_component[root] = components.size();
      components.emplace_back();
    }
    components[root_to_component[root]].push_back(i);
  }
  return components;
}

/// Intermediate state of a segmentation run, before the minimum-size filter.
struct SegmentationTrace {
  BoundaryFlags boundary;
  /// Connected components of same-class interior points.
  std::vector<std::vector<std::size_t>> interior_components;
  /// Per point: index into interior_components after boundary reattachment,
  /// or kNoise for boundary points with no instance in reach.
  std::vector<InstanceId> provisional;
};

/// Boundary detection, interior graph components and boundary reattachment.
/// `index` must be built over `cloud.positions()`.
SegmentationTrace segment_unfiltered(const LabeledPointCloud& cloud,
                                     const RadiusIndex& index,
                                     const SegmentationParams& params,
                                     std::size_t threads = 0);

/// Drops instances with fewer than `mu` points and canonicalizes ids.
InstanceLabeling apply_min_size(const SegmentationTrace& trace,
                                std::span<const ClassLabel> labels,
                                std::size_t mu);

/// Full instance segmentation of a class-labeled cloud. Deterministic for
/// any thread count.
InstanceLabeling segment(const LabeledPointCloud& cloud, const RadiusIndex& index,
                         const SegmentationParams& params, std::size_t threads = 0);
InstanceLabeling segment(const LabeledPointCloud& cloud,
                         const SegmentationParams& params, std::size_t threads = 0);

struct ObjectFragmentation {
  std::size_t point_count = 0;
  std::size_t component_count = 0;
  std::size_t largest_component = 0;

  double largest_fraction() const {
    return static_cast<double>(largest_component) / static_cast<double>(point_count);
  }
};

/// Components of one object's points at link radius `epsilon`, with no class
/// or boundary constraints. Throws std::invalid_argument for an empty set.
ObjectFragmentation segment_single_object(std::span<const Point3> points,
                                          double epsilon, std::size_t threads = 0);
/// Same, over the points of a prebuilt index.
ObjectFragmentation segment_single_object(const RadiusIndex& index, double epsilon,
                                          std::size_t threads = 0);

}  // namespace cloiseg
