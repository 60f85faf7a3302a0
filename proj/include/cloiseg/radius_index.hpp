#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cloiseg/types.hpp"

namespace cloiseg {

/// Immutable k-d tree for fixed-radius neighbor queries.
///
/// Queries use the closed ball: j is a neighbor of i when
/// |P_i - P_j|^2 <= r^2. Results are exactly the brute-force set, sorted by
/// ascending index. Leaves store coordinates as structure-of-arrays and are
/// scanned with the active SIMD kernel. Concurrent queries are safe.
class RadiusIndex {
 public:
  RadiusIndex() = default;
  /// Copies the positions; all must be finite.
  explicit RadiusIndex(std::span<const Point3> positions);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const Point3& position(std::size_t i) const { return positions_[i]; }
  std::span<const Point3> positions() const { return positions_; }

  /// Indices j != i with |P_i - P_j| <= r, ascending.
  /// Throws std::out_of_range for a bad i, std::invalid_argument unless r > 0.
  std::vector<std::size_t> radius_query(std::size_t i, double r) const;
  /// Same as above, reusing `out`.
  void radius_query(std::size_t i, double r, std::vector<std::size_t>& out) const;

  /// All indices (no exclusion) within r of an arbitrary point, ascending.
  void query_point(const Point3& q, double r, std::vector<std::size_t>& out) const;

 private:
  struct Node {
    double lo[3];
    double hi[3];
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build_node(std::uint32_t begin, std::uint32_t end);
  void collect(const Point3& q, double r2, std::vector<std::size_t>& out) const;

  std::vector<Point3> positions_;
  // Tree order: slot s holds original point order_[s].
  std::vector<std::uint32_t> order_;
  std::vector<double> xs_, ys_, zs_;
  std::vector<Node> nodes_;
};

}  // namespace cloiseg
