#include "cloiseg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace cloiseg {

double iou(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("IoU of an empty set");
  std::vector<std::size_t> sa(a.begin(), a.end());
  std::vector<std::size_t> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  std::size_t inter = 0;
  for (std::size_t i = 0, j = 0; i < sa.size() && j < sb.size();) {
    if (sa[i] < sb[j]) {
      ++i;
    } else if (sb[j] < sa[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MatchResult match_instances(const InstanceLabeling& pred, const InstanceLabeling& gt,
                            double t) {
  if (pred.point_count() != gt.point_count()) {
    throw std::invalid_argument("prediction and ground truth cover different clouds");
  }
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("threshold must be in (0, 1]");

  // Intersection sizes of every overlapping (pred, gt) pair.
  std::vector<std::pair<InstanceId, InstanceId>> overlaps;
  for (std::size_t i = 0; i < pred.point_count(); ++i) {
    if (pred.assignment[i] >= 0 && gt.assignment[i] >= 0) {
      overlaps.emplace_back(pred.assignment[i], gt.assignment[i]);
    }
  }
  std::sort(overlaps.begin(), overlaps.end());

  std::vector<MatchPair> candidates;
  for (std::size_t k = 0; k < overlaps.size();) {
    std::size_t run = k;
    while (run < overlaps.size() && overlaps[run] == overlaps[k]) ++run;
    const auto [p, g] = overlaps[k];
    const auto pi = static_cast<std::size_t>(p);
    const auto gi = static_cast<std::size_t>(g);
    if (pred.instance_class[pi] == gt.instance_class[gi]) {
      const std::size_t inter = run - k;
      const std::size_t uni = pred.instances[pi].size() + gt.instances[gi].size() - inter;
      const double value = static_cast<double>(inter) / static_cast<double>(uni);
      if (value >= t) candidates.push_back({p, g, value});
    }
    k = run;
  }
  std::sort(candidates.begin(), candidates.end(), [](const MatchPair& a, const MatchPair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });

  MatchResult result;
  result.threshold = t;
  std::vector<std::uint8_t> pred_used(pred.instance_count(), 0);
  std::vector<std::uint8_t> gt_used(gt.instance_count(), 0);
  for (const auto& c : candidates) {
    auto& pu = pred_used[static_cast<std::size_t>(c.pred)];
    auto& gu = gt_used[static_cast<std::size_t>(c.gt)];
    if (pu || gu) continue;
    pu = gu = 1;
    result.pairs.push_back(c);
  }
  for (std::size_t p = 0; p < pred_used.size(); ++p) {
    if (!pred_used[p]) result.unmatched_pred.push_back(static_cast<InstanceId>(p));
  }
  for (std::size_t g = 0; g < gt_used.size(); ++g) {
    if (!gt_used[g]) result.unmatched_gt.push_back(static_cast<InstanceId>(g));
  }
  return result;
}

const ThresholdScore& EvalReport::at(double t) const {
  for (const auto& s : per_threshold) {
    if (s.threshold == t) return s;
  }
  throw std::out_of_range("threshold was not scored");
}

EvalReport score(const InstanceLabeling& pred, const InstanceLabeling& gt,
                 std::span<const double> thresholds) {
  EvalReport report;
  for (const double t : thresholds) {
    const auto match = match_instances(pred, gt, t);
    ThresholdScore s;
    s.threshold = t;
    for (const auto& pair : match.pairs) {
      ++s.per_class[class_index(gt.instance_class[static_cast<std::size_t>(pair.gt)])].tp;
    }
    for (auto p : match.unmatched_pred) {
      ++s.per_class[class_index(pred.instance_class[static_cast<std::size_t>(p)])].fp;
    }
    for (auto g : match.unmatched_gt) {
      ++s.per_class[class_index(gt.instance_class[static_cast<std::size_t>(g)])].fn;
    }
    for (auto& c : s.per_class) {
      if (c.tp + c.fp > 0) {
        c.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
      }
      if (c.tp + c.fn > 0) {
        c.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
      }
    }
    double prec_sum = 0.0, rec_sum = 0.0;
    std::size_t prec_n = 0, rec_n = 0;
    for (auto label : kObjectClasses) {
      const auto& c = s.per_class[class_index(label)];
      if (c.precision) {
        prec_sum += *c.precision;
        ++prec_n;
      }
      if (c.recall) {
        rec_sum += *c.recall;
        ++rec_n;
      }
    }
    if (prec_n > 0) s.mean_precision = prec_sum / static_cast<double>(prec_n);
    if (rec_n > 0) s.mean_recall = rec_sum / static_cast<double>(rec_n);
    report.per_threshold.push_back(s);
  }
  return report;
}

double rec_ins(std::span<const ObjectFragmentation> objects, double t) {
  if (objects.empty()) throw std::invalid_argument("no ground-truth instances");
  std::size_t hits = 0;
  for (const auto& o : objects) {
    if (o.largest_fraction() >= t) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(objects.size());
}

}  // namespace cloiseg
