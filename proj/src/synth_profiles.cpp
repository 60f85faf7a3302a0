#include <cmath>
#include <stdexcept>
#include <string>

#include "cloiseg/random.hpp"
#include "cloiseg/synth.hpp"

namespace cloiseg::synth {

namespace {

constexpr double kPitch = 2.0;
// Upper bound on how far any randomly drawn object reaches from its cell
// center; keeps neighbors at least kPitch - 2 * kReach apart.
constexpr double kReach = 0.65;

Point3 unit(Point3 v) {
  const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  return {v.x / n, v.y / n, v.z / n};
}

Point3 random_axis(CounterRng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double s = std::sqrt(1.0 - z * z);
  return {s * std::cos(phi), s * std::sin(phi), z};
}

bool is_straight(ClassLabel label) {
  switch (label) {
    case ClassLabel::cylinder:
    case ClassLabel::ibeam:
    case ClassLabel::channel:
    case ClassLabel::angle:
    case ClassLabel::other:
      return true;
    default:
      return false;
  }
}

double straight_length(const ShapeDims& dims) {
  if (const auto* c = std::get_if<CylinderDims>(&dims)) return c->length;
  if (const auto* p = std::get_if<ProfileDims>(&dims)) return p->length;
  if (const auto* b = std::get_if<BoxDims>(&dims)) return b->length;
  return 0.0;
}

ShapeDims random_dims(ClassLabel label, CounterRng& rng) {
  switch (label) {
    case ClassLabel::cylinder:
      return CylinderDims{rng.uniform(0.05, 0.15), rng.uniform(0.6, 1.2)};
    case ClassLabel::elbow:
      return ElbowDims{rng.uniform(0.04, 0.08), rng.uniform(0.2, 0.3),
                       rng.below(2) == 0 ? 90.0 : 180.0};
    case ClassLabel::ibeam:
    case ClassLabel::channel:
    case ClassLabel::angle:
      return ProfileDims{rng.uniform(0.1, 0.25), rng.uniform(0.06, 0.15), rng.uniform(0.6, 1.2)};
    case ClassLabel::flange: {
      const double ri = rng.uniform(0.05, 0.08);
      return FlangeDims{ri, ri + rng.uniform(0.05, 0.08), ri + 0.01, 0.06};
    }
    case ClassLabel::valve:
      return ValveDims{rng.uniform(0.08, 0.12), 0.02, 0.15, 0.12, 0.012};
    case ClassLabel::other:
      return BoxDims{rng.uniform(0.2, 0.4), rng.uniform(0.2, 0.4), rng.uniform(0.2, 0.4)};
  }
  throw std::invalid_argument("unknown class");
}

// A randomly sized and oriented object roughly centered on `center`.
ShapeSpec random_object(ClassLabel label, Point3 center, CounterRng& rng, double density,
                        double sigma) {
  ShapeSpec s;
  s.label = label;
  s.dims = random_dims(label, rng);
  s.pose.axis = random_axis(rng);
  s.density = density;
  s.sigma = sigma;
  const double half = is_straight(label) ? straight_length(s.dims) / 2.0 : 0.0;
  s.pose.position = {center.x - half * s.pose.axis.x, center.y - half * s.pose.axis.y,
                     center.z - half * s.pose.axis.z};
  return s;
}

// One object of every class on a 4 x 2 grid with pitch kPitch.
SceneSpec grid_scene(std::uint64_t seed, double density, double sigma) {
  SceneSpec spec;
  spec.seed = seed;
  spec.declared_min_gap = kPitch - 2.0 * kReach;
  auto rng = CounterRng::derive(seed, 0xC0FFEE);
  for (std::size_t k = 0; k < kAllClasses.size(); ++k) {
    const Point3 center{kPitch * static_cast<double>(k % 4), kPitch * static_cast<double>(k / 4),
                        0.0};
    spec.shapes.push_back(random_object(kAllClasses[k], center, rng, density, sigma));
  }
  return spec;
}

ShapeSpec make_shape(ClassLabel label, Point3 position, Point3 axis, ShapeDims dims,
                     double density, double sigma) {
  ShapeSpec s;
  s.label = label;
  s.pose = {position, unit(axis)};
  s.dims = dims;
  s.density = density;
  s.sigma = sigma;
  return s;
}

SceneManifest base_manifest(std::string_view profile, std::size_t index, double density,
                            double sigma) {
  SceneManifest m;
  m.profile = std::string(profile);
  m.name = m.profile + "-" + std::to_string(index);
  m.sample_spacing = 1.0 / std::sqrt(density);
  m.sigma = sigma;
  return m;
}

BenchmarkScene separated_scene(std::string_view profile, std::size_t index, std::uint64_t seed,
                               double density, double sigma) {
  BenchmarkScene b;
  b.spec = grid_scene(seed, density, sigma);
  b.manifest = base_manifest(profile, index, density, sigma);
  b.manifest.min_inter_gap = b.spec.declared_min_gap;
  b.manifest.expect_perfect = true;
  b.manifest.notes = "one object per class, isolated on a 2 m grid";
  return b;
}

BenchmarkScene sparse_scene(std::size_t index, std::uint64_t seed) {
  constexpr double kDensity = 1500.0, kSigma = 0.003, kGap = 0.05;
  BenchmarkScene b;
  b.spec = grid_scene(seed, kDensity, kSigma);
  for (auto& s : b.spec.shapes) {
    if (!is_straight(s.label) || s.label == ClassLabel::other) continue;
    const double mid = straight_length(s.dims) / 2.0;
    s.gaps.push_back({mid - kGap / 2.0, mid + kGap / 2.0});
  }
  b.manifest = base_manifest("sparse", index, kDensity, kSigma);
  b.manifest.min_inter_gap = b.spec.declared_min_gap;
  b.manifest.max_intra_gap = kGap;
  b.manifest.expect_over_segmentation = true;
  b.manifest.notes = "low density; straight objects cut by a 5 cm occlusion gap";
  return b;
}

BenchmarkScene close_scene(std::size_t index, std::uint64_t seed) {
  constexpr double kDensity = 20000.0, kSigma = 0.001, kRadius = 0.05, kGap = 0.02;
  BenchmarkScene b;
  b.spec.seed = seed;
  b.spec.declared_min_gap = kGap;
  auto rng = CounterRng::derive(seed, 0xC105E);
  const double length = rng.uniform(1.5, 2.0);
  // Conduits bundled side by side in a tray.
  for (int k = 0; k < 5; ++k) {
    const double y = static_cast<double>(k) * (2.0 * kRadius + kGap);
    b.spec.shapes.push_back(make_shape(ClassLabel::cylinder, {0.0, y, 0.0}, {1, 0, 0},
                                       CylinderDims{kRadius, length}, kDensity, kSigma));
  }
  b.spec.shapes.push_back(make_shape(ClassLabel::ibeam, {0.0, 2.0, 0.0}, {1, 0, 0},
                                     ProfileDims{0.2, 0.1, length}, kDensity, kSigma));
  b.manifest = base_manifest("close", index, kDensity, kSigma);
  b.manifest.min_inter_gap = kGap;
  b.manifest.expect_merging = true;
  b.manifest.notes = "five parallel conduits with 2 cm surface gaps";
  return b;
}

BenchmarkScene cluttered_scene(std::size_t index, std::uint64_t seed) {
  constexpr double kDensity = 10000.0, kSigma = 0.001;
  BenchmarkScene b;
  b.spec = grid_scene(seed, kDensity, kSigma);
  b.spec.clutter.count = 4000;
  b.spec.clutter.min = {-1.0, -1.0, -1.0};
  b.spec.clutter.max = {3.0 * kPitch + 1.0, kPitch + 1.0, 1.0};
  b.manifest = base_manifest("cluttered", index, kDensity, kSigma);
  b.manifest.min_inter_gap = 0.0;
  b.manifest.notes = "isolated objects inside uniformly scattered other-class clutter";
  return b;
}

BenchmarkScene refinery_scene(std::size_t index, std::uint64_t seed) {
  constexpr double kDensity = 10000.0, kSigma = 0.001;
  BenchmarkScene b;
  b.spec.seed = seed;
  auto rng = CounterRng::derive(seed, 0x4EF1);
  auto& shapes = b.spec.shapes;
  const double r = rng.uniform(0.05, 0.1);
  const double len = rng.uniform(0.8, 1.2);

  // Pipe run: two spools butted end to end with no gap and a flange at the
  // far end.
  shapes.push_back(make_shape(ClassLabel::cylinder, {0, 0, 0}, {1, 0, 0},
                              CylinderDims{r, len}, kDensity, kSigma));
  shapes.push_back(make_shape(ClassLabel::cylinder, {len, 0, 0}, {1, 0, 0},
                              CylinderDims{r, len}, kDensity, kSigma));
  shapes.push_back(make_shape(ClassLabel::flange, {2 * len, 0, 0}, {1, 0, 0},
                              FlangeDims{r * 0.6, r + 0.06, r, 0.05}, kDensity, kSigma));
  // Elbow in the xy plane ending at the pipe start, plus the pipe feeding it.
  const double bend = 0.3;
  shapes.push_back(make_shape(ClassLabel::elbow, {0, -bend, 0}, {0, 0, 1},
                              ElbowDims{r, bend, 90.0}, kDensity, kSigma));
  shapes.push_back(make_shape(ClassLabel::cylinder, {bend, -bend - len, 0}, {0, 1, 0},
                              CylinderDims{r, len}, kDensity, kSigma));

  // Valve sitting inline on its own pipe.
  const double rb = 0.12;
  const double inset = std::sqrt(rb * rb - r * r);
  shapes.push_back(make_shape(ClassLabel::valve, {0, 3.0, 0}, {0, 0, 1},
                              ValveDims{rb, 0.02, 0.15, 0.12, 0.012}, kDensity, kSigma));
  shapes.push_back(make_shape(ClassLabel::cylinder, {inset, 3.0, 0}, {1, 0, 0},
                              CylinderDims{r, len}, kDensity, kSigma));

  // Steel: two I-beams welded end to end, an angle brace touching the second.
  const ProfileDims beam{0.2, 0.1, len};
  shapes.push_back(make_shape(ClassLabel::ibeam, {0, -2.0, 0}, {1, 0, 0}, beam, kDensity, kSigma));
  shapes.push_back(make_shape(ClassLabel::ibeam, {len, -2.0, 0}, {1, 0, 0}, beam, kDensity, kSigma));
  shapes.push_back(make_shape(ClassLabel::angle, {len, -2.0, 0.1}, {0, 0, 1},
                              ProfileDims{0.08, 0.08, 0.6}, kDensity, kSigma));
  shapes.push_back(make_shape(ClassLabel::channel, {0, -4.0, 0}, {1, 0, 0},
                              ProfileDims{0.15, 0.07, len}, kDensity, kSigma));

  b.manifest = base_manifest("refinery-like", index, kDensity, kSigma);
  b.manifest.expect_merging = true;
  b.manifest.notes =
      "fused junctions: same-class spools and welded beams merge; "
      "different-class joints split at class boundaries";
  return b;
}

BenchmarkScene gapped_scene(std::size_t index, std::uint64_t seed) {
  constexpr double kDensity = 20000.0, kSigma = 0.0, kLength = 1.2, kGap = 0.035;
  constexpr ClassLabel kKinds[] = {ClassLabel::cylinder, ClassLabel::cylinder, ClassLabel::cylinder,
                                   ClassLabel::cylinder, ClassLabel::ibeam,    ClassLabel::ibeam,
                                   ClassLabel::channel,  ClassLabel::channel,  ClassLabel::angle,
                                   ClassLabel::angle};
  BenchmarkScene b;
  b.spec.seed = seed;
  b.spec.declared_min_gap = kPitch - 2.0 * kReach;
  auto rng = CounterRng::derive(seed, 0x6A99);
  std::size_t k = 0;
  for (const auto label : kKinds) {
    const Point3 center{kPitch * static_cast<double>(k % 5), kPitch * static_cast<double>(k / 5),
                        0.0};
    auto s = random_object(label, center, rng, kDensity, kSigma);
    if (auto* c = std::get_if<CylinderDims>(&s.dims)) c->length = kLength;
    if (auto* p = std::get_if<ProfileDims>(&s.dims)) p->length = kLength;
    s.pose.position = {center.x - kLength / 2 * s.pose.axis.x,
                       center.y - kLength / 2 * s.pose.axis.y,
                       center.z - kLength / 2 * s.pose.axis.z};
    s.gaps = {{0.4, 0.4 + kGap}, {0.8, 0.8 + kGap}};
    b.spec.shapes.push_back(std::move(s));
    ++k;
  }
  b.manifest = base_manifest("gapped", index, kDensity, kSigma);
  b.manifest.min_inter_gap = b.spec.declared_min_gap;
  b.manifest.max_intra_gap = kGap;
  b.manifest.expect_over_segmentation = true;
  b.manifest.notes = "straight 1.2 m objects, each cut by two 3.5 cm gaps";
  return b;
}

}  // namespace

const std::vector<std::string>& benchmark_profiles() {
  static const std::vector<std::string> names = {"separated", "sparse",        "dense", "close",
                                                 "cluttered", "refinery-like", "gapped"};
  return names;
}

std::vector<BenchmarkScene> make_benchmark_suite(std::string_view profile, std::uint64_t seed) {
  constexpr std::size_t kScenes = 2;
  std::vector<BenchmarkScene> out;
  for (std::size_t i = 0; i < kScenes; ++i) {
    const auto scene_seed = CounterRng::derive(seed, i).key();
    if (profile == "separated") {
      out.push_back(separated_scene(profile, i, scene_seed, 10000.0, 0.001));
    } else if (profile == "dense") {
      out.push_back(separated_scene(profile, i, scene_seed, 20000.0, 0.002));
    } else if (profile == "sparse") {
      out.push_back(sparse_scene(i, scene_seed));
    } else if (profile == "close") {
      out.push_back(close_scene(i, scene_seed));
    } else if (profile == "cluttered") {
      out.push_back(cluttered_scene(i, scene_seed));
    } else if (profile == "refinery-like") {
      out.push_back(refinery_scene(i, scene_seed));
    } else if (profile == "gapped") {
      out.push_back(gapped_scene(i, scene_seed));
    } else {
      throw std::invalid_argument("unknown benchmark profile '" + std::string(profile) + "'");
    }
  }
  return out;
}

}  // namespace cloiseg::synth
