#include <gtest/gtest.h>

#include <cmath>

#include "cloiseg/radius_index.hpp"
#include "cloiseg/synth.hpp"

using namespace cloiseg;
using namespace cloiseg::synth;

namespace {

ShapeSpec shape(ClassLabel label, ShapeDims dims, Point3 axis = {0.3, -0.5, 0.8}) {
  ShapeSpec s;
  s.label = label;
  s.pose = {{1.0, 2.0, -0.5}, axis};
  s.dims = dims;
  s.density = 20000.0;
  return s;
}

}  // namespace

TEST(Synth, CylinderPointsLieOnTheSurface) {
  const auto s = shape(ClassLabel::cylinder, CylinderDims{0.08, 1.3});
  const auto pts = sample_shape(s, 5);
  ASSERT_GT(pts.size(), 1000u);
  for (const auto& p : pts) {
    const auto l = to_local(s.pose, p);
    EXPECT_NEAR(std::hypot(l.x, l.y), 0.08, 1e-9);
    EXPECT_GE(l.z, -1e-9);
    EXPECT_LE(l.z, 1.3 + 1e-9);
  }
  const double area = 2.0 * std::acos(-1.0) * 0.08 * 1.3;
  EXPECT_NEAR(static_cast<double>(pts.size()), area * s.density, 0.05 * area * s.density);
}

TEST(Synth, ElbowPointsLieOnTheTorus) {
  const ElbowDims d{0.05, 0.25, 90.0};
  const auto s = shape(ClassLabel::elbow, d, {0, 0, 1});
  for (const auto& p : sample_shape(s, 8)) {
    const auto l = to_local(s.pose, p);
    const double rho = std::hypot(l.x, l.y);
    EXPECT_NEAR(std::hypot(rho - d.bend_radius, l.z), d.tube_radius, 1e-9);
    const double angle = std::atan2(l.y, l.x);
    EXPECT_GE(angle, -1e-9);
    EXPECT_LE(angle, std::acos(-1.0) / 2.0 + 1e-9);
  }
}

TEST(Synth, FlangeHasABore) {
  const FlangeDims d{0.05, 0.12, 0.07, 0.06};
  const auto s = shape(ClassLabel::flange, d);
  for (const auto& p : sample_shape(s, 2)) {
    const auto l = to_local(s.pose, p);
    const double rho = std::hypot(l.x, l.y);
    EXPECT_GE(rho, d.inner_radius - 1e-9);
    EXPECT_LE(rho, d.outer_radius + 1e-9);
    if (std::abs(l.z) > 1e-9) {
      EXPECT_NEAR(rho, d.collar_radius, 1e-9);
    }
  }
}

TEST(Synth, IbeamPointCountTracksArea) {
  const ProfileDims d{0.3, 0.15, 2.0};
  const auto s = shape(ClassLabel::ibeam, d);
  const double area = (d.height + 2.0 * d.width) * d.length;
  const auto n = static_cast<double>(sample_shape(s, 4).size());
  EXPECT_NEAR(n, area * s.density, 0.05 * area * s.density);
}

TEST(Synth, GapsAreEmpty) {
  auto s = shape(ClassLabel::channel, ProfileDims{0.2, 0.08, 1.5});
  s.gaps = {{0.3, 0.36}, {1.0, 1.05}};
  std::size_t near_gap = 0;
  for (const auto& p : sample_shape(s, 11)) {
    const double a = axial_coordinate(s, p);
    for (const auto& g : s.gaps) {
      EXPECT_FALSE(a >= g.begin && a < g.end) << a;
      near_gap += std::abs(a - g.begin) < 0.01 || std::abs(a - g.end) < 0.01;
    }
  }
  EXPECT_GT(near_gap, 0u);

  auto e = shape(ClassLabel::elbow, ElbowDims{0.05, 0.3, 90.0});
  e.gaps = {{0.2, 0.26}};
  for (const auto& p : sample_shape(e, 1)) {
    const double a = axial_coordinate(e, p);
    EXPECT_FALSE(a >= 0.2 && a < 0.26) << a;
  }
}

TEST(Synth, NoiseMovesPointsOffTheSurface) {
  auto s = shape(ClassLabel::cylinder, CylinderDims{0.1, 1.0});
  s.sigma = 0.002;
  double sum2 = 0.0;
  const auto pts = sample_shape(s, 3);
  for (const auto& p : pts) {
    const auto l = to_local(s.pose, p);
    const double dev = std::hypot(l.x, l.y) - 0.1;
    sum2 += dev * dev;
  }
  EXPECT_NEAR(std::sqrt(sum2 / static_cast<double>(pts.size())), 0.002, 0.0003);
}

TEST(Synth, EveryShapeKindSamples) {
  const std::vector<ShapeSpec> shapes{
      shape(ClassLabel::valve, ValveDims{}, {0, 0, 1}),
      shape(ClassLabel::other, BoxDims{}),
      shape(ClassLabel::angle, ProfileDims{0.1, 0.1, 0.5}),
      shape(ClassLabel::cylinder, CylinderDims{}, {0, 0, -1}),
  };
  for (const auto& s : shapes) {
    const auto pts = sample_shape(s, 1);
    EXPECT_GT(pts.size(), 100u);
    for (const auto& p : pts) ASSERT_TRUE(is_finite(p));
  }
}

TEST(Synth, ScenesAreDeterministic) {
  for (const auto& profile : benchmark_profiles()) {
    const auto a = make_benchmark_suite(profile, 3);
    const auto b = make_benchmark_suite(profile, 3);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(generate_scene(a[0].spec), generate_scene(b[0].spec)) << profile;
    EXPECT_NE(generate_scene(a[0].spec), generate_scene(make_benchmark_suite(profile, 4)[0].spec))
        << profile;
  }
}

TEST(Synth, ManifestsDoNotDependOnTheSeed) {
  for (const auto& profile : benchmark_profiles()) {
    const auto a = make_benchmark_suite(profile, 1);
    const auto b = make_benchmark_suite(profile, 99);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].manifest, b[i].manifest);
  }
  EXPECT_THROW(make_benchmark_suite("nope", 0), std::invalid_argument);
}

TEST(Synth, SceneInstancesMatchShapes) {
  const auto scene = make_benchmark_suite("cluttered", 0)[0];
  const auto cloud = generate_scene(scene.spec);
  const auto hist = class_histogram(cloud);
  for (auto c : kObjectClasses) EXPECT_EQ(hist[class_index(c)].instances, 1u);
  // The "other" shape plus the clutter instance.
  EXPECT_EQ(hist[class_index(ClassLabel::other)].instances, 2u);
}

TEST(Synth, SeparatedProfileKeepsObjectsApart) {
  for (std::uint64_t seed : {0, 1, 2}) {
    for (const auto& scene : make_benchmark_suite("separated", seed)) {
      const auto cloud = generate_scene(scene.spec);
      const RadiusIndex index(cloud.positions());
      std::vector<std::size_t> nb;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        index.radius_query(i, 0.1, nb);
        for (auto j : nb) ASSERT_EQ(cloud[i].gt_instance, cloud[j].gt_instance);
      }
    }
  }
}

TEST(Synth, JsonRoundTripRegeneratesTheSameCloud) {
  for (const auto& profile : benchmark_profiles()) {
    const auto spec = make_benchmark_suite(profile, 5)[1].spec;
    const auto back = scene_from_json(scene_to_json(spec));
    EXPECT_EQ(scene_to_json(back), scene_to_json(spec));
    EXPECT_EQ(generate_scene(back), generate_scene(spec)) << profile;
  }
}

TEST(Synth, JsonDefaultsAndErrors) {
  const auto spec = scene_from_json(
      R"({"seed": 4, "shapes": [{"class": "cylinder", "dimensions": {"radius": 0.2}}]})");
  ASSERT_EQ(spec.shapes.size(), 1u);
  EXPECT_EQ(spec.seed, 4u);
  const auto& dims = std::get<CylinderDims>(spec.shapes[0].dims);
  EXPECT_EQ(dims.radius, 0.2);
  EXPECT_EQ(dims.length, CylinderDims{}.length);

  EXPECT_THROW(scene_from_json("{"), std::invalid_argument);
  EXPECT_THROW(scene_from_json(R"({"shapes": [{"class": "pipe"}]})"), std::invalid_argument);
  EXPECT_THROW(scene_from_json(R"({"shapes": [{"class": "cylinder", "dimensions": {"radius": -1}}]})"),
               std::invalid_argument);
}

TEST(Synth, ValidationRejectsBadShapes) {
  EXPECT_THROW(shape(ClassLabel::cylinder, CylinderDims{0.0, 1.0}).validate(),
               std::invalid_argument);
  EXPECT_THROW(shape(ClassLabel::cylinder, ProfileDims{}).validate(), std::invalid_argument);
  EXPECT_THROW(shape(ClassLabel::cylinder, CylinderDims{}, {0, 0, 0}).validate(),
               std::invalid_argument);
  EXPECT_THROW(shape(ClassLabel::flange, FlangeDims{0.1, 0.05, 0.07, 0.06}).validate(),
               std::invalid_argument);
  auto s = shape(ClassLabel::cylinder, CylinderDims{});
  s.density = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(sample_shape(s, 0), std::invalid_argument);
}

TEST(Synth, TilingCopiesEveryShape) {
  const auto spec = make_benchmark_suite("cluttered", 0)[0].spec;
  const auto tiled = tile_scene(spec, 3, 2, 10.0);
  EXPECT_EQ(tiled.shapes.size(), 6 * spec.shapes.size());
  const auto base = generate_scene(spec);
  const auto big = generate_scene(tiled);
  EXPECT_NEAR(static_cast<double>(big.size()), 6.0 * static_cast<double>(base.size()),
              0.01 * static_cast<double>(big.size()));
}
