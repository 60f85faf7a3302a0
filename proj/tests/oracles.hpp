#pragma once

// Brute-force reference implementations used as test oracles. They share no
// code with the library beyond the plain data types.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "cloiseg/point_cloud.hpp"
#include "cloiseg/random.hpp"

namespace oracle {

using cloiseg::ClassLabel;
using cloiseg::InstanceId;
using cloiseg::Point3;

inline double d2(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return (dx * dx + dy * dy) + dz * dz;
}

inline std::vector<std::size_t> radius_query(const std::vector<Point3>& pts, std::size_t i,
                                             double r) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j != i && d2(pts[i], pts[j]) <= r * r) out.push_back(j);
  }
  return out;
}

template <class Key>
std::vector<std::uint8_t> boundaries(const std::vector<Point3>& pts, const std::vector<Key>& keys,
                                     double r) {
  std::vector<std::uint8_t> flags(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i && keys[i] != keys[j] && d2(pts[i], pts[j]) <= r * r) {
        flags[i] = 1;
        break;
      }
    }
  }
  return flags;
}

/// Relabels ids by ascending smallest member; negatives stay -1.
inline std::vector<InstanceId> canonical(const std::vector<InstanceId>& ids) {
  std::map<InstanceId, InstanceId> remap;
  std::vector<InstanceId> out(ids.size(), -1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0) continue;
    auto [it, inserted] = remap.emplace(ids[i], static_cast<InstanceId>(remap.size()));
    out[i] = it->second;
  }
  return out;
}

/// Queue-based BFS components over the points with `active[i]`, linking pairs
/// within eps that satisfy `linked`. Component ids follow the smallest member.
template <class Linked>
std::vector<InstanceId> bfs_components(const std::vector<Point3>& pts,
                                       const std::vector<std::uint8_t>& active, double eps,
                                       Linked linked) {
  std::vector<InstanceId> comp(pts.size(), -1);
  InstanceId next = 0;
  for (std::size_t s = 0; s < pts.size(); ++s) {
    if (!active[s] || comp[s] >= 0) continue;
    std::deque<std::size_t> queue{s};
    comp[s] = next;
    while (!queue.empty()) {
      const auto i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i || !active[j] || comp[j] >= 0) continue;
        if (d2(pts[i], pts[j]) <= eps * eps && linked(i, j)) {
          comp[j] = next;
          queue.push_back(j);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// Class boundaries, interior BFS, nearest same-class interior reattachment
/// within 3 eps (ties to the lower component), size filter, canonical ids.
inline std::vector<InstanceId> segment(const std::vector<Point3>& pts,
                                       const std::vector<ClassLabel>& labels, double eps,
                                       std::size_t mu, double rb) {
  const auto boundary = boundaries(pts, labels, rb);
  std::vector<std::uint8_t> interior(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) interior[i] = !boundary[i];
  auto comp = bfs_components(pts, interior, eps,
                             [&](std::size_t i, std::size_t j) { return labels[i] == labels[j]; });
  const double reach = 3.0 * eps;
  std::vector<InstanceId> assigned = comp;
  for (std::size_t b = 0; b < pts.size(); ++b) {
    if (!boundary[b]) continue;
    double best = std::numeric_limits<double>::infinity();
    InstanceId who = -1;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (boundary[j] || labels[j] != labels[b]) continue;
      const double d = d2(pts[b], pts[j]);
      if (d > reach * reach) continue;
      if (d < best || (d == best && comp[j] < who)) {
        best = d;
        who = comp[j];
      }
    }
    assigned[b] = who;
  }
  std::map<InstanceId, std::size_t> sizes;
  for (auto id : assigned) {
    if (id >= 0) ++sizes[id];
  }
  for (auto& id : assigned) {
    if (id >= 0 && sizes[id] < mu) id = -1;
  }
  return canonical(assigned);
}

struct Match {
  std::size_t tp = 0;
  std::vector<std::pair<InstanceId, InstanceId>> pairs;
};

/// Greedy one-to-one matching written from the rule: enumerate every
/// (pred, gt) pair by counting point overlaps directly.
inline Match greedy_match(const std::vector<InstanceId>& pred, const std::vector<InstanceId>& gt,
                          const std::vector<ClassLabel>& labels, double t) {
  std::map<InstanceId, std::set<std::size_t>> p, g;
  std::map<InstanceId, ClassLabel> pc, gc;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] >= 0) {
      p[pred[i]].insert(i);
      pc[pred[i]] = labels[i];
    }
    if (gt[i] >= 0) {
      g[gt[i]].insert(i);
      gc[gt[i]] = labels[i];
    }
  }
  struct Cand {
    double iou;
    InstanceId p, g;
  };
  std::vector<Cand> cands;
  for (const auto& [pid, ps] : p) {
    for (const auto& [gid, gs] : g) {
      if (pc[pid] != gc[gid]) continue;
      std::size_t inter = 0;
      for (auto i : ps) inter += gs.count(i);
      const double v = static_cast<double>(inter) / static_cast<double>(ps.size() + gs.size() - inter);
      if (inter > 0 && v >= t) cands.push_back({v, pid, gid});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.p != b.p) return a.p < b.p;
    return a.g < b.g;
  });
  Match m;
  std::set<InstanceId> pu, gu;
  for (const auto& c : cands) {
    if (pu.count(c.p) || gu.count(c.g)) continue;
    pu.insert(c.p);
    gu.insert(c.g);
    m.pairs.emplace_back(c.p, c.g);
  }
  m.tp = m.pairs.size();
  return m;
}

/// Plain farthest-point order with lowest-index ties.
inline std::vector<std::size_t> fps(const std::vector<Point3>& pts, std::size_t k,
                                    std::size_t first) {
  std::vector<std::size_t> chosen{first};
  while (chosen.size() < k) {
    double best = -1.0;
    std::size_t who = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      double m = std::numeric_limits<double>::infinity();
      for (auto c : chosen) m = std::min(m, d2(pts[i], pts[c]));
      if (m > best) {
        best = m;
        who = i;
      }
    }
    chosen.push_back(who);
  }
  return chosen;
}

/// Random points in a cube of side `extent` with labels drawn from the first
/// `classes` codes. Uses its own generator so tests do not depend on the
/// library RNG for their inputs.
struct RandomCloud {
  std::vector<Point3> points;
  std::vector<ClassLabel> labels;
};

inline RandomCloud random_cloud(std::uint64_t seed, std::size_t n, double extent,
                                int classes) {
  std::uint64_t s = seed * 0x9E3779B97F4A7C15ULL + 1;
  auto next = [&s]() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  };
  auto unit = [&]() { return static_cast<double>(next() >> 11) * 0x1.0p-53; };
  RandomCloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.points.push_back({unit() * extent, unit() * extent, unit() * extent});
    c.labels.push_back(static_cast<ClassLabel>(next() % static_cast<std::uint64_t>(classes)));
  }
  return c;
}

inline cloiseg::LabeledPointCloud to_cloud(const RandomCloud& rc) {
  std::vector<cloiseg::PointRecord> recs;
  for (std::size_t i = 0; i < rc.points.size(); ++i) {
    recs.push_back({rc.points[i], rc.labels[i], static_cast<InstanceId>(i), false, std::nullopt});
  }
  return cloiseg::LabeledPointCloud(std::move(recs));
}

}  // namespace oracle
