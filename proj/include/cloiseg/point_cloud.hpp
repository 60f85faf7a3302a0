#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cloiseg/types.hpp"

namespace cloiseg {

struct PointRecord {
  Point3 position;
  ClassLabel label = ClassLabel::other;
  std::optional<InstanceId> gt_instance;
  bool boundary = false;
  /// Absent until segmentation runs; kNoise for unassigned points.
  std::optional<InstanceId> pred_instance;

  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

/// Ordered, immutable set of labeled points.
///
/// Construction validates the model invariants and rewrites instance ids to
/// canonical form: instances are numbered 0, 1, 2, ... in ascending order of
/// their smallest member index. Ground-truth ids and predictions are each
/// either present on every point or on none.
///
/// Throws std::invalid_argument when a coordinate is non-finite, a
/// ground-truth instance mixes class labels, or ids are present on only part
/// of the cloud.
class LabeledPointCloud {
 public:
  LabeledPointCloud() = default;
  explicit LabeledPointCloud(std::vector<PointRecord> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const PointRecord& operator[](std::size_t i) const { return points_[i]; }
  std::span<const PointRecord> points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  /// Vacuously true for an empty cloud.
  bool has_ground_truth() const { return has_gt_; }
  bool has_predictions() const { return has_pred_; }
  bool has_boundary_flags() const;

  std::vector<Point3> positions() const;
  std::vector<ClassLabel> labels() const;

  /// Per-point ground-truth ids; throws std::invalid_argument when absent.
  std::vector<InstanceId> gt_instances() const;
  /// Per-point predicted ids (kNoise included); throws when absent.
  std::vector<InstanceId> pred_instances() const;

  LabeledPointCloud with_predictions(std::span<const InstanceId> pred) const;
  LabeledPointCloud without_predictions() const;
  LabeledPointCloud with_boundary_flags(std::span<const std::uint8_t> flags) const;
  /// Points at `indices`, in the given order, with ids re-canonicalized.
  LabeledPointCloud subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const LabeledPointCloud&,
                         const LabeledPointCloud&) = default;

 private:
  std::vector<PointRecord> points_;
  bool has_gt_ = true;
  bool has_pred_ = false;
};

/// Relabels non-negative ids to 0, 1, 2, ... by first appearance. kNoise is
/// preserved. Returns the number of distinct instances.
std::size_t canonicalize_ids(std::span<InstanceId> ids);

struct ClassCounts {
  std::size_t instances = 0;
  std::size_t points = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

using ClassHistogram = std::array<ClassCounts, kClassCount>;

/// Ground-truth instance and point counts per class, indexed by class code.
/// Throws std::invalid_argument for a non-empty cloud without ground truth.
ClassHistogram class_histogram(const LabeledPointCloud& cloud);

}  // namespace cloiseg
