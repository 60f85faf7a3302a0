#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cloiseg/segmentation.hpp"

namespace cloiseg {

/// |A ∩ B| / |A ∪ B| for two point-index sets. Throws std::invalid_argument if
/// either set is empty.
double iou(std::span<const std::size_t> a, std::span<const std::size_t> b);

struct MatchPair {
  InstanceId pred = 0;
  InstanceId gt = 0;
  double iou = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchResult {
  /// In acceptance order (descending IoU).
  std::vector<MatchPair> pairs;
  std::vector<InstanceId> unmatched_pred;
  std::vector<InstanceId> unmatched_gt;
  double threshold = 0.5;
};

/// One-to-one greedy matching: every class-consistent (pred, gt) pair with
/// IoU >= t, taken by descending IoU (ties: lower pred id, then lower gt id),
/// is accepted when neither side is already matched.
///
/// Throws std::invalid_argument when the labelings cover different point
/// counts or t is outside (0, 1].
MatchResult match_instances(const InstanceLabeling& pred, const InstanceLabeling& gt,
                            double t);

struct ClassScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  /// Undefined (nullopt) when the denominator is zero.
  std::optional<double> precision;
  std::optional<double> recall;
};

struct ThresholdScore {
  double threshold = 0.5;
  /// Indexed by class code.
  std::array<ClassScore, kClassCount> per_class{};
  /// Unweighted means over the seven object classes with defined values;
  /// "other" never contributes.
  std::optional<double> mean_precision;
  std::optional<double> mean_recall;
};

struct EvalReport {
  std::vector<ThresholdScore> per_threshold;

  /// Throws std::out_of_range when t was not scored.
  const ThresholdScore& at(double t) const;
};

inline constexpr std::array<double, 3> kDefaultThresholds = {0.25, 0.5, 0.75};

EvalReport score(const InstanceLabeling& pred, const InstanceLabeling& gt,
                 std::span<const double> thresholds = kDefaultThresholds);

/// Fraction of objects whose largest single-object component reaches IoU >= t
/// against the whole object. Throws std::invalid_argument for an empty list.
double rec_ins(std::span<const ObjectFragmentation> objects, double t);

}  // namespace cloiseg
