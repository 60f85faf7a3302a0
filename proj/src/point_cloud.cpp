#include "cloiseg/point_cloud.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cloiseg {

namespace {

constexpr std::array<std::string_view, kClassCount> kClassNames = {
    "other", "angle", "channel", "cylinder",
    "elbow", "ibeam", "flange",  "valve"};

}  // namespace

std::string_view class_name(ClassLabel c) { return kClassNames[class_index(c)]; }

std::optional<ClassLabel> class_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (kClassNames[i] == name) return static_cast<ClassLabel>(i);
  }
  return std::nullopt;
}

std::size_t canonicalize_ids(std::span<InstanceId> ids) {
  std::unordered_map<InstanceId, InstanceId> remap;
  for (auto& id : ids) {
    if (id < 0) {
      id = kNoise;
      continue;
    }
    auto [it, inserted] =
        remap.try_emplace(id, static_cast<InstanceId>(remap.size()));
    id = it->second;
  }
  return remap.size();
}

LabeledPointCloud::LabeledPointCloud(std::vector<PointRecord> points)
    : points_(std::move(points)) {
  std::size_t gt_count = 0;
  std::size_t pred_count = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!is_finite(p.position)) {
      throw std::invalid_argument("point " + std::to_string(i) +
                                  " has a non-finite coordinate");
    }
    if (p.gt_instance) {
      if (*p.gt_instance < 0) {
        throw std::invalid_argument("point " + std::to_string(i) +
                                    " has a negative ground-truth id");
      }
      ++gt_count;
    }
    if (p.pred_instance) ++pred_count;
  }
  if (gt_count != 0 && gt_count != points_.size()) {
    throw std::invalid_argument(
        "ground-truth ids must be present on all points or on none");
  }
  if (pred_count != 0 && pred_count != points_.size()) {
    throw std::invalid_argument(
        "predicted ids must be present on all points or on none");
  }
  has_gt_ = gt_count == points_.size();
  has_pred_ = !points_.empty() && pred_count == points_.size();

  if (has_gt_ && !points_.empty()) {
    std::unordered_map<InstanceId, ClassLabel> instance_class;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto [it, inserted] =
          instance_class.try_emplace(*points_[i].gt_instance, points_[i].label);
      if (!inserted && it->second != points_[i].label) {
        throw std::invalid_argument(
            "ground-truth instance " + std::to_string(*points_[i].gt_instance) +
            " mixes classes (point " + std::to_string(i) + ")");
      }
    }
    auto ids = gt_instances();
    canonicalize_ids(ids);
    for (std::size_t i = 0; i < points_.size(); ++i) points_[i].gt_instance = ids[i];
  }
  if (has_pred_) {
    auto ids = pred_instances();
    canonicalize_ids(ids);
    for (std::size_t i = 0; i < points_.size(); ++i) points_[i].pred_instance = ids[i];
  }
}

bool LabeledPointCloud::has_boundary_flags() const {
  for (const auto& p : points_) {
    if (p.boundary) return true;
  }
  return false;
}

std::vector<Point3> LabeledPointCloud::positions() const {
  std::vector<Point3> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.position);
  return out;
}

std::vector<ClassLabel> LabeledPointCloud::labels() const {
  std::vector<ClassLabel> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.label);
  return out;
}

std::vector<InstanceId> LabeledPointCloud::gt_instances() const {
  if (!has_gt_) throw std::invalid_argument("cloud has no ground-truth instances");
  std::vector<InstanceId> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(*p.gt_instance);
  return out;
}

std::vector<InstanceId> LabeledPointCloud::pred_instances() const {
  if (!has_pred_ && !points_.empty()) {
    throw std::invalid_argument("cloud has no predicted instances");
  }
  std::vector<InstanceId> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(*p.pred_instance);
  return out;
}

LabeledPointCloud LabeledPointCloud::with_predictions(
    std::span<const InstanceId> pred) const {
  if (pred.size() != points_.size()) {
    throw std::invalid_argument("prediction count does not match cloud size");
  }
  auto points = points_;
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].pred_instance = pred[i] < 0 ? kNoise : pred[i];
  }
  return LabeledPointCloud(std::move(points));
}

LabeledPointCloud LabeledPointCloud::without_predictions() const {
  auto points = points_;
  for (auto& p : points) p.pred_instance.reset();
  return LabeledPointCloud(std::move(points));
}

LabeledPointCloud LabeledPointCloud::with_boundary_flags(
    std::span<const std::uint8_t> flags) const {
  if (flags.size() != points_.size()) {
    throw std::invalid_argument("flag count does not match cloud size");
  }
  auto points = points_;
  for (std::size_t i = 0; i < points.size(); ++i) points[i].boundary = flags[i] != 0;
  return LabeledPointCloud(std::move(points));
}

LabeledPointCloud LabeledPointCloud::subset(
    std::span<const std::size_t> indices) const {
  std::vector<PointRecord> points;
  points.reserve(indices.size());
  for (auto i : indices) {
    if (i >= points_.size()) throw std::out_of_range("subset index out of range");
    points.push_back(points_[i]);
  }
  return LabeledPointCloud(std::move(points));
}

ClassHistogram class_histogram(const LabeledPointCloud& cloud) {
  ClassHistogram hist{};
  if (cloud.empty()) return hist;
  const auto ids = cloud.gt_instances();
  // Ids are canonical, so instance k is new exactly when k equals the count
  // of instances seen so far.
  InstanceId next = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto& counts = hist[class_index(cloud[i].label)];
    ++counts.points;
    if (ids[i] == next) {
      ++counts.instances;
      ++next;
    }
  }
  return hist;
}

}  // namespace cloiseg
