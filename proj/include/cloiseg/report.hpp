#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "cloiseg/boundary.hpp"
#include "cloiseg/evaluation.hpp"
#include "cloiseg/point_cloud.hpp"
#include "cloiseg/sweep.hpp"

// CSV writers shared by the command-line tool and library callers. Every
// table has a header row; numbers use the shortest round-trip decimal form
// and undefined values are written as NA.

namespace cloiseg {

std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

/// Rows: the eight classes, then "mean" (mPrec / mRec over the seven object
/// classes, counts summed over them). Columns: prec@t, rec@t per threshold,
/// then tp@t, fp@t, fn@t per threshold.
void write_eval_csv(std::ostream& out, const EvalReport& report);

/// mu, threshold, prec_<class>, rec_<class> for every class, mPrec, mRec.
void write_mu_csv(std::ostream& out, std::span<const MuRow> rows);

/// epsilon, components, instances, mPrec@t, mRec@t per threshold.
void write_epsilon_csv(std::ostream& out, std::span<const EpsilonRow> rows);

/// epsilon, mRec_ins@t per threshold, Rec_ins_<class>@t per threshold.
void write_radius_csv(std::ostream& out, std::span<const RadiusRow> rows,
                      std::span<const double> thresholds);

/// facility, mPrec, mRec per facility, then "mean" and "std" rows.
void write_bias_csv(std::ostream& out, const BiasReport& report);

/// class, instances, points per class plus a "total" row.
void write_stats_csv(std::ostream& out, const ClassHistogram& histogram);

}  // namespace cloiseg
