#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cloiseg/evaluation.hpp"
#include "cloiseg/segmentation.hpp"

// Parameter studies over link radius and minimum instance size. Every row is
// the result of an ordinary segment + score run with that row's parameters;
// rows are returned in grid order. Unless a row says otherwise, the boundary
// radius follows epsilon (set SegmentationParams::boundary_radius to pin it).

namespace cloiseg {

std::vector<double> default_epsilon_grid();
std::vector<std::size_t> default_mu_grid();

struct SweepSpec {
  std::vector<double> epsilons = default_epsilon_grid();
  std::vector<std::size_t> mus = default_mu_grid();
  std::vector<double> thresholds{kDefaultThresholds.begin(), kDefaultThresholds.end()};

  /// Throws std::invalid_argument for empty or unsorted grids, non-positive
  /// epsilons, mu = 0 or thresholds outside (0, 1].
  void validate() const;
};

struct MuRow {
  std::size_t mu = 0;
  ThresholdScore score;
};

/// One row per mu at a fixed epsilon (and boundary radius) from `base`.
/// Grid must ascend strictly.
std::vector<MuRow> sweep_mu(const LabeledPointCloud& cloud, const SegmentationParams& base,
                            std::span<const std::size_t> mus, double t,
                            std::size_t threads = 0);

struct EpsilonRow {
  double epsilon = 0.0;
  /// Interior components before the minimum-size filter.
  std::size_t components = 0;
  /// Instances after the filter.
  std::size_t instances = 0;
  EvalReport report;
};

/// One row per epsilon at the fixed mu of `base`. The boundary radius is
/// `base.boundary_radius` when set, otherwise the row's epsilon.
std::vector<EpsilonRow> sweep_epsilon(const LabeledPointCloud& cloud,
                                      const SegmentationParams& base,
                                      std::span<const double> epsilons,
                                      std::span<const double> thresholds,
                                      std::size_t threads = 0);

struct RadiusRow {
  double epsilon = 0.0;
  /// Per threshold: fraction of all ground-truth instances whose largest
  /// single-object component reaches the threshold.
  std::vector<double> mrec_ins;
  /// Per threshold, per class code; undefined for classes without instances.
  std::vector<std::array<std::optional<double>, kClassCount>> rec_ins;
};

/// Runs single-object segmentation on every ground-truth instance at every
/// epsilon. Requires ground truth.
std::vector<RadiusRow> sweep_radius_per_object(const LabeledPointCloud& cloud,
                                               std::span<const double> epsilons,
                                               std::span<const double> thresholds,
                                               std::size_t threads = 0);

/// Smallest epsilon whose mRec_ins at threshold t reaches `target`.
std::optional<double> select_radius(std::span<const RadiusRow> rows,
                                    std::span<const double> thresholds, double t = 0.5,
                                    double target = 0.9);

struct FacilityResult {
  std::string name;
  std::optional<double> mean_precision;
  std::optional<double> mean_recall;
};

struct Spread {
  double mean = 0.0;
  /// Sample standard deviation (n - 1).
  double stddev = 0.0;
  /// Facilities with a defined value.
  std::size_t count = 0;
};

struct BiasReport {
  double threshold = 0.5;
  std::vector<FacilityResult> facilities;
  std::optional<Spread> precision;
  std::optional<Spread> recall;
};

struct NamedCloud {
  std::string name;
  const LabeledPointCloud* cloud = nullptr;
};

/// Per-facility mPrec / mRec at threshold t plus their spread. Throws
/// std::invalid_argument for fewer than two clouds.
BiasReport facility_bias_report(std::span<const NamedCloud> clouds,
                                const SegmentationParams& params, double t,
                                std::size_t threads = 0);

}  // namespace cloiseg
