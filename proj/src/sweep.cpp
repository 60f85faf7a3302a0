#include "cloiseg/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cloiseg {

namespace {

void require_ascending(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw std::invalid_argument(std::string(what) + " grid values must be positive");
    }
    if (i > 0 && !(grid[i - 1] < grid[i])) {
      throw std::invalid_argument(std::string(what) + " grid must ascend");
    }
  }
}

void require_thresholds(std::span<const double> thresholds) {
  if (thresholds.empty()) throw std::invalid_argument("no thresholds");
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("threshold must be in (0, 1]");
  }
}

std::optional<Spread> spread(const std::vector<std::optional<double>>& values) {
  std::vector<double> v;
  for (const auto& x : values) {
    if (x) v.push_back(*x);
  }
  if (v.empty()) return std::nullopt;
  Spread s;
  s.count = v.size();
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

}  // namespace

std::vector<double> default_epsilon_grid() {
  return {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07};
}

std::vector<std::size_t> default_mu_grid() { return {10, 20, 50, 100, 150, 200}; }

void SweepSpec::validate() const {
  require_ascending(epsilons, "epsilon");
  if (mus.empty()) throw std::invalid_argument("mu grid is empty");
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (mus[i] == 0) throw std::invalid_argument("mu grid values must be at least 1");
    if (i > 0 && !(mus[i - 1] < mus[i])) throw std::invalid_argument("mu grid must ascend");
  }
  require_thresholds(thresholds);
}

std::vector<MuRow> sweep_mu(const LabeledPointCloud& cloud, const SegmentationParams& base,
                            std::span<const std::size_t> mus, double t, std::size_t threads) {
  SweepSpec check;
  check.mus.assign(mus.begin(), mus.end());
  check.thresholds = {t};
  check.validate();
  base.validate();

  const auto gt = ground_truth_labeling(cloud);
  const auto labels = cloud.labels();
  const RadiusIndex index(cloud.positions());
  // The filter is the only step that depends on mu.
  const auto trace = segment_unfiltered(cloud, index, base, threads);
  const double thresholds[] = {t};
  std::vector<MuRow> rows;
  for (auto mu : mus) {
    const auto pred = apply_min_size(trace, labels, mu);
    rows.push_back({mu, score(pred, gt, thresholds).per_threshold.front()});
  }
  return rows;
}

std::vector<EpsilonRow> sweep_epsilon(const LabeledPointCloud& cloud,
                                      const SegmentationParams& base,
                                      std::span<const double> epsilons,
                                      std::span<const double> thresholds,
                                      std::size_t threads) {
  require_ascending(epsilons, "epsilon");
  require_thresholds(thresholds);
  const auto gt = ground_truth_labeling(cloud);
  const auto labels = cloud.labels();
  const RadiusIndex index(cloud.positions());
  std::vector<EpsilonRow> rows;
  for (double eps : epsilons) {
    SegmentationParams p = base;
    p.epsilon = eps;
    const auto trace = segment_unfiltered(cloud, index, p, threads);
    const auto pred = apply_min_size(trace, labels, p.mu);
    EpsilonRow row;
    row.epsilon = eps;
    row.components = trace.interior_components.size();
    row.instances = pred.instance_count();
    row.report = score(pred, gt, thresholds);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RadiusRow> sweep_radius_per_object(const LabeledPointCloud& cloud,
                                               std::span<const double> epsilons,
                                               std::span<const double> thresholds,
                                               std::size_t threads) {
  require_ascending(epsilons, "epsilon");
  require_thresholds(thresholds);
  if (!cloud.has_ground_truth() || cloud.size() == 0) {
    throw std::invalid_argument("radius sweep needs ground-truth instances");
  }
  const auto gt = ground_truth_labeling(cloud);
  if (gt.instance_count() == 0) throw std::invalid_argument("no ground-truth instances");

  std::vector<RadiusIndex> objects;
  objects.reserve(gt.instance_count());
  for (const auto& members : gt.instances) {
    std::vector<Point3> pts;
    pts.reserve(members.size());
    for (auto i : members) pts.push_back(cloud.points()[i].position);
    objects.emplace_back(pts);
  }

  std::vector<RadiusRow> rows;
  for (double eps : epsilons) {
    std::vector<ObjectFragmentation> frags;
    frags.reserve(objects.size());
    for (const auto& index : objects) frags.push_back(segment_single_object(index, eps, threads));

    RadiusRow row;
    row.epsilon = eps;
    for (double t : thresholds) {
      row.mrec_ins.push_back(rec_ins(frags, t));
      std::array<std::optional<double>, kClassCount> per_class{};
      for (auto c : kAllClasses) {
        std::vector<ObjectFragmentation> subset;
        for (std::size_t k = 0; k < frags.size(); ++k) {
          if (gt.instance_class[k] == c) subset.push_back(frags[k]);
        }
        if (!subset.empty()) per_class[class_index(c)] = rec_ins(subset, t);
      }
      row.rec_ins.push_back(per_class);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> select_radius(std::span<const RadiusRow> rows,
                                    std::span<const double> thresholds, double t,
                                    double target) {
  const auto it = std::find(thresholds.begin(), thresholds.end(), t);
  if (it == thresholds.end()) throw std::invalid_argument("threshold was not swept");
  const auto k = static_cast<std::size_t>(it - thresholds.begin());
  for (const auto& row : rows) {
    if (row.mrec_ins.at(k) >= target) return row.epsilon;
  }
  return std::nullopt;
}

BiasReport facility_bias_report(std::span<const NamedCloud> clouds,
                                const SegmentationParams& params, double t,
                                std::size_t threads) {
  if (clouds.size() < 2) throw std::invalid_argument("bias report needs at least two clouds");
  params.validate();
  const double thresholds[] = {t};
  require_thresholds(thresholds);
  BiasReport report;
  report.threshold = t;
  std::vector<std::optional<double>> precisions, recalls;
  for (const auto& named : clouds) {
    const auto& cloud = *named.cloud;
    const auto pred = segment(cloud, params, threads);
    const auto s = score(pred, ground_truth_labeling(cloud), thresholds).per_threshold.front();
    report.facilities.push_back({named.name, s.mean_precision, s.mean_recall});
    precisions.push_back(s.mean_precision);
    recalls.push_back(s.mean_recall);
  }
  report.precision = spread(precisions);
  report.recall = spread(recalls);
  return report;
}

}  // namespace cloiseg
