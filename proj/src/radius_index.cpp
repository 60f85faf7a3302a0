#include "cloiseg/radius_index.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cloiseg/simd/kernels.hpp"

namespace cloiseg {

namespace {

constexpr std::uint32_t kLeafSize = 32;

double coord(const Point3& p, int axis) {
  return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

}  // namespace

RadiusIndex::RadiusIndex(std::span<const Point3> positions)
    : positions_(positions.begin(), positions.end()) {
  if (positions_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("RadiusIndex supports fewer than 2^32 points");
  }
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!is_finite(positions_[i])) {
      throw std::invalid_argument("non-finite position at index " + std::to_string(i));
    }
  }
  order_.resize(positions_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!positions_.empty()) {
    nodes_.reserve(2 * (positions_.size() / kLeafSize + 1));
    build_node(0, static_cast<std::uint32_t>(positions_.size()));
  }
  xs_.resize(order_.size());
  ys_.resize(order_.size());
  zs_.resize(order_.size());
  for (std::size_t s = 0; s < order_.size(); ++s) {
    const auto& p = positions_[order_[s]];
    xs_[s] = p.x;
    ys_[s] = p.y;
    zs_[s] = p.z;
  }
}

std::int32_t RadiusIndex::build_node(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});
  Node node{};
  node.begin = begin;
  node.end = end;
  for (int a = 0; a < 3; ++a) {
    node.lo[a] = std::numeric_limits<double>::infinity();
    node.hi[a] = -std::numeric_limits<double>::infinity();
  }
  for (auto s = begin; s < end; ++s) {
    const auto& p = positions_[order_[s]];
    for (int a = 0; a < 3; ++a) {
      node.lo[a] = std::min(node.lo[a], coord(p, a));
      node.hi[a] = std::max(node.hi[a], coord(p, a));
    }
  }
  if (end - begin > kLeafSize) {
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (node.hi[a] - node.lo[a] > node.hi[axis] - node.lo[axis]) axis = a;
    }
    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                       return coord(positions_[a], axis) < coord(positions_[b], axis);
                     });
    node.left = build_node(begin, mid);
    node.right = build_node(mid, end);
  }
  nodes_[static_cast<std::size_t>(id)] = node;
  return id;
}

void RadiusIndex::collect(const Point3& q, double r2,
                          std::vector<std::size_t>& out) const {
  out.clear();
  if (nodes_.empty()) return;
  const auto& select = simd::active_kernels().radius_select;
  std::array<std::uint32_t, kLeafSize> hits{};
  std::array<std::int32_t, 128> stack{};
  std::size_t top = 0;
  stack[top++] = 0;
  const double qc[3] = {q.x, q.y, q.z};
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    double near2 = 0.0;
    double far2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double dlo = node.lo[a] - qc[a];
      const double dhi = qc[a] - node.hi[a];
      const double gap = std::max({dlo, dhi, 0.0});
      near2 += gap * gap;
      const double span = std::max(qc[a] - node.lo[a], node.hi[a] - qc[a]);
      far2 += span * span;
    }
    if (near2 > r2) continue;
    if (far2 <= r2) {
      // Every point lies within the ball; rounding is monotone, so the
      // per-point test would accept each of them too.
      for (auto s = node.begin; s < node.end; ++s) out.push_back(order_[s]);
      continue;
    }
    if (node.left < 0) {
      const simd::CoordsView leaf{xs_.data() + node.begin, ys_.data() + node.begin,
                                  zs_.data() + node.begin, node.end - node.begin};
      const auto n = select(leaf, q, r2, hits.data());
      for (std::size_t k = 0; k < n; ++k) out.push_back(order_[node.begin + hits[k]]);
      continue;
    }
    stack[top++] = node.left;
    stack[top++] = node.right;
  }
  std::sort(out.begin(), out.end());
}

void RadiusIndex::radius_query(std::size_t i, double r,
                               std::vector<std::size_t>& out) const {
  if (i >= positions_.size()) {
    throw std::out_of_range("point index " + std::to_string(i) + " out of range");
  }
  if (!(r > 0.0)) throw std::invalid_argument("query radius must be positive");
  collect(positions_[i], r * r, out);
  auto self = std::lower_bound(out.begin(), out.end(), i);
  if (self != out.end() && *self == i) out.erase(self);
}

std::vector<std::size_t> RadiusIndex::radius_query(std::size_t i, double r) const {
  std::vector<std::size_t> out;
  radius_query(i, r, out);
  return out;
}

void RadiusIndex::query_point(const Point3& q, double r,
                              std::vector<std::size_t>& out) const {
  if (!(r > 0.0)) throw std::invalid_argument("query radius must be positive");
  collect(q, r * r, out);
}

}  // namespace cloiseg
