#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cloiseg/point_cloud.hpp"

// Deterministic synthetic scenes of industrial objects with exact
// ground-truth labels.
//
// Every shape is built in a local frame whose +z is the shape's axis, then
// rotated onto Pose::axis by the minimal rotation and translated to
// Pose::position. Surfaces are sampled on stratified jittered grids with cell
// size 1/sqrt(density), one point per cell, so the point count is close to
// density x area and no hole larger than about two cells appears by chance.
// Randomness comes from CounterRng::derive(scene seed, shape index).

namespace cloiseg::synth {

struct Pose {
  Point3 position;
  /// Need not be normalized; must be nonzero.
  Point3 axis{0.0, 0.0, 1.0};
};

/// Lateral surface, z in [0, length].
struct CylinderDims {
  double radius = 0.1;
  double length = 1.0;
};

/// Torus sector: tube of `tube_radius` around a centerline arc of
/// `bend_radius` in the local xy plane, starting on +x and sweeping
/// counter-clockwise.
struct ElbowDims {
  double tube_radius = 0.05;
  double bend_radius = 0.2;
  double sweep_deg = 90.0;
};

/// Thin-walled extruded profile sampled on its centerline, z in [0, length].
/// I-beam: web of `height`, two flanges of `width`. Channel: web plus two
/// flanges on one side. Angle: legs of `height` and `width`.
struct ProfileDims {
  double height = 0.2;
  double width = 0.1;
  double length = 1.0;
};

/// Annular face at z = 0 plus a collar cylinder of `collar_radius` on
/// z in [0, collar_length].
struct FlangeDims {
  double inner_radius = 0.05;
  double outer_radius = 0.12;
  double collar_radius = 0.07;
  double collar_length = 0.06;
};

/// Spherical body at the origin, stem along +z, and a handwheel: a flat
/// plate from the stem out to a torus rim at the stem top.
struct ValveDims {
  double body_radius = 0.1;
  double stem_radius = 0.02;
  double stem_length = 0.15;
  double wheel_radius = 0.12;
  double wheel_tube_radius = 0.012;
};

/// Box surface, x and y centered, z in [0, length].
struct BoxDims {
  double width = 0.3;
  double height = 0.3;
  double length = 0.3;
};

using ShapeDims =
    std::variant<CylinderDims, ElbowDims, ProfileDims, FlangeDims, ValveDims, BoxDims>;

/// Closed-open interval [begin, end) of the axial coordinate, in meters:
/// local z for straight shapes, centerline arc length for elbows.
struct Gap {
  double begin = 0.0;
  double end = 0.0;
};

struct ShapeSpec {
  ClassLabel label = ClassLabel::cylinder;
  Pose pose;
  ShapeDims dims = CylinderDims{};
  /// Points per square meter.
  double density = 10000.0;
  /// Standard deviation of Gaussian offset along the surface normal (m).
  double sigma = 0.0;
  std::vector<Gap> gaps;

  /// Throws std::invalid_argument for non-positive sizes, a dims type that
  /// does not fit the class, or inconsistent composite radii.
  void validate() const;
};

/// Random "other" points scattered uniformly in an axis-aligned box; they form
/// one ground-truth instance.
struct ClutterSpec {
  std::size_t count = 0;
  Point3 min;
  Point3 max;
};

struct SceneSpec {
  std::vector<ShapeSpec> shapes;
  std::uint64_t seed = 0;
  ClutterSpec clutter;
  /// Smallest surface distance between distinct shapes the author intends;
  /// bookkeeping for tests, not enforced.
  double declared_min_gap = 0.0;

  void validate() const;
};

/// Surface samples of one shape in world coordinates. Throws
/// std::invalid_argument for an invalid shape.
std::vector<Point3> sample_shape(const ShapeSpec& shape, std::uint64_t seed);

/// Shapes in spec order (instance id = shape index, empty shapes skipped),
/// then clutter. Identical specs give identical clouds.
LabeledPointCloud generate_scene(const SceneSpec& spec);

/// Axial coordinate of a world point in the shape's frame (see Gap).
double axial_coordinate(const ShapeSpec& shape, const Point3& world);

/// World point -> shape-local frame.
Point3 to_local(const Pose& pose, const Point3& world);

/// Expectations a benchmark scene is built to satisfy at the default
/// parameters (link radius 4 cm, boundary radius 4 cm).
struct SceneManifest {
  std::string profile;
  std::string name;
  /// Smallest surface gap between distinct instances (m).
  double min_inter_gap = 0.0;
  /// Largest deliberate gap inside one instance (m); 0 when none.
  double max_intra_gap = 0.0;
  /// Largest sampling cell edge (m).
  double sample_spacing = 0.0;
  double sigma = 0.0;
  bool expect_perfect = false;
  bool expect_over_segmentation = false;
  bool expect_merging = false;
  std::string notes;

  friend bool operator==(const SceneManifest&, const SceneManifest&) = default;
};

struct BenchmarkScene {
  SceneSpec spec;
  SceneManifest manifest;
};

/// Known profiles: separated, sparse, dense, close, cluttered, refinery-like,
/// gapped. Throws std::invalid_argument for anything else.
std::vector<BenchmarkScene> make_benchmark_suite(std::string_view profile,
                                                 std::uint64_t seed);

const std::vector<std::string>& benchmark_profiles();

/// Copies of every shape and the clutter box shifted onto an nx-by-ny grid
/// with the given pitch (m). Used to scale scenes up.
SceneSpec tile_scene(const SceneSpec& spec, std::size_t nx, std::size_t ny,
                     double pitch);

// JSON schema (see README): {"seed", "declared_min_gap", "clutter":
// {"count","min","max"}, "shapes": [{"class","position","axis","dimensions",
// "density","sigma","gaps"}]}.
std::string scene_to_json(const SceneSpec& spec);
SceneSpec scene_from_json(std::string_view text);
std::string manifest_to_json(const SceneManifest& manifest);

}  // namespace cloiseg::synth
