#include "cloiseg/segmentation.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cloiseg {

void SegmentationParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (mu < 1) throw std::invalid_argument("mu must be at least 1");
  BoundaryParams{effective_boundary_radius()}.validate();
}

InstanceLabeling InstanceLabeling::from_assignment(std::span<const InstanceId> ids,
                                                   std::span<const ClassLabel> labels) {
  if (ids.size() != labels.size()) {
    throw std::invalid_argument("assignment and label counts differ");
  }
  InstanceLabeling out;
  out.assignment.assign(ids.begin(), ids.end());
  const auto count = canonicalize_ids(out.assignment);
  out.instances.resize(count);
  out.instance_class.resize(count);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto id = out.assignment[i];
    if (id < 0) continue;
    auto& members = out.instances[static_cast<std::size_t>(id)];
    if (members.empty()) {
      out.instance_class[static_cast<std::size_t>(id)] = labels[i];
    } else if (out.instance_class[static_cast<std::size_t>(id)] != labels[i]) {
      throw std::invalid_argument("instance " + std::to_string(id) + " mixes classes");
    }
    members.push_back(i);
  }
  return out;
}

InstanceLabeling ground_truth_labeling(const LabeledPointCloud& cloud) {
  const auto ids = cloud.gt_instances();
  const auto labels = cloud.labels();
  return InstanceLabeling::from_assignment(ids, labels);
}

InstanceLabeling predicted_labeling(const LabeledPointCloud& cloud) {
  const auto ids = cloud.pred_instances();
  const auto labels = cloud.labels();
  return InstanceLabeling::from_assignment(ids, labels);
}

SegmentationTrace segment_unfiltered(const LabeledPointCloud& cloud,
                                     const RadiusIndex& index,
                                     const SegmentationParams& params,
                                     std::size_t threads) {
  params.validate();
  if (index.size() != cloud.size()) {
    throw std::invalid_argument("index was not built over this cloud");
  }
  SegmentationTrace trace;
  trace.boundary = detect_class_boundaries(
      cloud, index, BoundaryParams{params.effective_boundary_radius()}, threads);

  const auto labels = cloud.labels();
  std::vector<std::size_t> interior;
  interior.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!trace.boundary[i]) interior.push_back(i);
  }
  trace.interior_components = connected_components(
      interior, index, params.epsilon,
      [&](std::size_t i, std::size_t j) { return labels[i] == labels[j]; }, threads);

  trace.provisional.assign(cloud.size(), kNoise);
  for (std::size_t c = 0; c < trace.interior_components.size(); ++c) {
    for (auto i : trace.interior_components[c]) {
      trace.provisional[i] = static_cast<InstanceId>(c);
    }
  }

  // Each boundary point joins the instance of its nearest same-class interior
  // point within the reattachment cap. Only interior points are candidates,
  // so the result does not depend on the order boundary points are visited.
  // Equal distances go to the lower component id.
  const double reach = SegmentationParams::kReattachFactor * params.epsilon;
  const double reach2 = reach * reach;
  parallel_for(cloud.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> candidates;
    for (std::size_t b = begin; b < end; ++b) {
      if (!trace.boundary[b]) continue;
      const auto& pb = index.position(b);
      index.query_point(pb, reach, candidates);
      double best_d2 = std::numeric_limits<double>::infinity();
      InstanceId best = kNoise;
      for (auto j : candidates) {
        if (trace.boundary[j] || labels[j] != labels[b]) continue;
        const double d2 = squared_distance(pb, index.position(j));
        if (d2 > reach2) continue;
        const auto c = trace.provisional[j];
        if (d2 < best_d2 || (d2 == best_d2 && c < best)) {
          best_d2 = d2;
          best = c;
        }
      }
      trace.provisional[b] = best;
    }
  }, 512);
  return trace;
}

InstanceLabeling apply_min_size(const SegmentationTrace& trace,
                                std::span<const ClassLabel> labels, std::size_t mu) {
  std::vector<std::size_t> sizes(trace.interior_components.size(), 0);
  for (auto id : trace.provisional) {
    if (id >= 0) ++sizes[static_cast<std::size_t>(id)];
  }
  std::vector<InstanceId> filtered(trace.provisional);
  for (auto& id : filtered) {
    if (id >= 0 && sizes[static_cast<std::size_t>(id)] < mu) id = kNoise;
  }
  return InstanceLabeling::from_assignment(filtered, labels);
}

InstanceLabeling segment(const LabeledPointCloud& cloud, const RadiusIndex& index,
                         const SegmentationParams& params, std::size_t threads) {
  const auto trace = segment_unfiltered(cloud, index, params, threads);
  const auto labels = cloud.labels();
  return apply_min_size(trace, labels, params.mu);
}

InstanceLabeling segment(const LabeledPointCloud& cloud,
                         const SegmentationParams& params, std::size_t threads) {
  params.validate();
  const auto positions = cloud.positions();
  const RadiusIndex index(positions);
  return segment(cloud, index, params, threads);
}

ObjectFragmentation segment_single_object(std::span<const Point3> points,
                                          double epsilon, std::size_t threads) {
  if (points.empty()) throw std::invalid_argument("object has no points");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return segment_single_object(RadiusIndex(points), epsilon, threads);
}

ObjectFragmentation segment_single_object(const RadiusIndex& index, double epsilon,
                                          std::size_t threads) {
  if (index.empty()) throw std::invalid_argument("object has no points");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  std::vector<std::size_t> all(index.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto components = connected_components(
      all, index, epsilon, [](std::size_t, std::size_t) { return true; }, threads);
  ObjectFragmentation out;
  out.point_count = index.size();
  out.component_count = components.size();
  for (const auto& c : components) {
    out.largest_component = std::max(out.largest_component, c.size());
  }
  return out;
}

}  // namespace cloiseg
