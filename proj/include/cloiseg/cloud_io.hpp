#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "cloiseg/point_cloud.hpp"

namespace cloiseg {

/// Malformed input. `line()` is 1-based; the header is line 1.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CLOI-PTS text format:
//
//   cloi-pts v1 n=<N>
//   x y z class_id gt_instance_id [pred_instance_id [boundary]]
//
// -1 in an id column means absent (ground truth) or NOISE (prediction).
// Coordinates are written in shortest round-trip decimal form, so a
// save/load cycle reproduces every double bit-exactly.

LabeledPointCloud read_pts(std::istream& in);
LabeledPointCloud load_pts(const std::filesystem::path& path);

struct PtsColumns {
  /// Sixth column. Written as -1 on clouds without predictions.
  bool predictions = false;
  /// Seventh column (0/1). Implies the predictions column.
  bool boundary = false;
};

void write_pts(std::ostream& out, const LabeledPointCloud& cloud,
               PtsColumns columns = {});
void save_pts(const LabeledPointCloud& cloud, const std::filesystem::path& path,
              bool include_predictions, bool include_boundary = false);

/// ASCII PLY importer. The vertex element must carry x, y, z and class;
/// instance is optional. Other properties and elements are ignored.
LabeledPointCloud read_ply_ascii(std::istream& in);
LabeledPointCloud load_ply_ascii(const std::filesystem::path& path);

/// Dispatches on extension: .ply goes to the PLY importer, anything else is
/// read as CLOI-PTS.
LabeledPointCloud load_cloud(const std::filesystem::path& path);

}  // namespace cloiseg
