#include "cloiseg/subsample.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "cloiseg/random.hpp"
#include "cloiseg/simd/kernels.hpp"

namespace cloiseg {

std::vector<std::size_t> farthest_point_indices(std::span<const Point3> positions,
                                                std::size_t k, std::size_t first) {
  const std::size_t n = positions.size();
  if (k == 0 || k > n) {
    throw std::invalid_argument("subsample size must be in [1, N]");
  }
  if (first >= n) throw std::invalid_argument("start index out of range");

  std::vector<double> xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = positions[i].x;
    ys[i] = positions[i].y;
    zs[i] = positions[i].z;
  }
  const simd::CoordsView view{xs.data(), ys.data(), zs.data(), n};
  const auto update = simd::active_kernels().farthest_update;

  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> chosen(n, 0);
  std::vector<std::size_t> order;
  order.reserve(k);
  std::size_t next = first;
  std::size_t lowest_unchosen = 0;
  while (order.size() < k) {
    order.push_back(next);
    chosen[next] = 1;
    if (order.size() == k) break;
    next = update(view, positions[next], min_d2.data());
    if (min_d2[next] == 0.0) {
      // Everything left duplicates a chosen point; the argmax may then be a
      // chosen point itself, so take the lowest unchosen index instead.
      while (chosen[lowest_unchosen]) ++lowest_unchosen;
      next = lowest_unchosen;
    }
  }
  return order;
}

std::size_t farthest_point_seed_index(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("empty cloud");
  CounterRng rng(seed);
  return static_cast<std::size_t>(rng.below(n));
}

LabeledPointCloud farthest_point_subsample(const LabeledPointCloud& cloud,
                                           std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > cloud.size()) {
    throw std::invalid_argument("subsample size must be in [1, N]");
  }
  const auto positions = cloud.positions();
  auto indices = farthest_point_indices(positions, k,
                                        farthest_point_seed_index(cloud.size(), seed));
  std::sort(indices.begin(), indices.end());
  return cloud.subset(indices);
}

}  // namespace cloiseg
