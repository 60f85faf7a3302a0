#include "cloiseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cloiseg/random.hpp"

namespace cloiseg::synth {

namespace {

constexpr double kPi = std::numbers::pi;

Point3 add(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Point3 scale(Point3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double norm(Point3 a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }

// Row-major rotation taking local +z onto the (normalized) pose axis with the
// smallest angle.
struct Rotation {
  double m[3][3];

  Point3 apply(Point3 p) const {
    return {m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z};
  }
  Point3 apply_transpose(Point3 p) const {
    return {m[0][0] * p.x + m[1][0] * p.y + m[2][0] * p.z,
            m[0][1] * p.x + m[1][1] * p.y + m[2][1] * p.z,
            m[0][2] * p.x + m[1][2] * p.y + m[2][2] * p.z};
  }
};

Rotation rotation_onto(Point3 axis) {
  const double n = norm(axis);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("pose axis must be nonzero");
  const Point3 w = scale(axis, 1.0 / n);
  Rotation r{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const double c = w.z;
  if (c <= -1.0 + 1e-12) {
    r = Rotation{{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
    return r;
  }
  // R = I + [v]x + [v]x^2 / (1 + c) with v = z x w.
  const double vx = -w.y, vy = w.x, vz = 0.0;
  const double k[3][3] = {{0, -vz, vy}, {vz, 0, -vx}, {-vy, vx, 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double k2 = 0.0;
      for (int t = 0; t < 3; ++t) k2 += k[i][t] * k[t][j];
      r.m[i][j] += k[i][j] + k2 / (1.0 + c);
    }
  }
  return r;
}

std::size_t cells(double length, double spacing) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / spacing - 1e-9)));
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Receives local surface samples, drops those in gaps, applies normal noise
// and maps them to world coordinates.
class Emitter {
 public:
  Emitter(const ShapeSpec& shape, CounterRng& rng, std::vector<Point3>& out)
      : shape_(shape), rotation_(rotation_onto(shape.pose.axis)), rng_(rng), out_(out) {}

  void operator()(Point3 local, Point3 normal, double axial) {
    for (const auto& g : shape_.gaps) {
      if (axial >= g.begin && axial < g.end) return;
    }
    if (shape_.sigma > 0.0) local = add(local, scale(normal, shape_.sigma * rng_.normal()));
    out_.push_back(add(shape_.pose.position, rotation_.apply(local)));
  }

  CounterRng& rng() { return rng_; }
  double spacing() const { return 1.0 / std::sqrt(shape_.density); }

 private:
  const ShapeSpec& shape_;
  Rotation rotation_;
  CounterRng& rng_;
  std::vector<Point3>& out_;
};

// One jittered sample per cell of a u_len x v_len parameter rectangle.
template <class Fn>
void jittered_grid(double u_len, double v_len, double spacing, CounterRng& rng, Fn&& fn) {
  const auto nu = cells(u_len, spacing);
  const auto nv = cells(v_len, spacing);
  const double du = u_len / static_cast<double>(nu);
  const double dv = v_len / static_cast<double>(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    for (std::size_t i = 0; i < nu; ++i) {
      const double u = (static_cast<double>(i) + rng.uniform01()) * du;
      const double v = (static_cast<double>(j) + rng.uniform01()) * dv;
      fn(u, v);
    }
  }
}

void sample_cylinder(Emitter& emit, double radius, double z0, double z1) {
  jittered_grid(2.0 * kPi * radius, z1 - z0, emit.spacing(), emit.rng(), [&](double u, double v) {
    const double phi = u / radius;
    const Point3 n{std::cos(phi), std::sin(phi), 0.0};
    const double z = z0 + v;
    emit({radius * n.x, radius * n.y, z}, n, z);
  });
}

// Torus sector around the z axis at height z_offset. When `arc_axial` is set
// the axial coordinate is centerline arc length, otherwise local z.
void sample_torus(Emitter& emit, double tube, double bend, double sweep, double z_offset,
                  bool arc_axial) {
  const double outer = bend + tube;
  jittered_grid(2.0 * kPi * tube, outer * sweep, emit.spacing(), emit.rng(),
                [&](double u, double v) {
                  const double alpha = v / outer;
                  const double beta = u / tube;
                  const Point3 radial{std::cos(alpha), std::sin(alpha), 0.0};
                  const Point3 n{std::cos(beta) * radial.x, std::cos(beta) * radial.y,
                                 std::sin(beta)};
                  const Point3 p{bend * radial.x + tube * n.x, bend * radial.y + tube * n.y,
                                 z_offset + tube * n.z};
                  emit(p, n, arc_axial ? bend * alpha : p.z);
                });
}

void sample_annulus(Emitter& emit, double r_in, double r_out, double z) {
  const double spacing = emit.spacing();
  auto& rng = emit.rng();
  const auto rings = cells(r_out - r_in, spacing);
  const double dr = (r_out - r_in) / static_cast<double>(rings);
  for (std::size_t j = 0; j < rings; ++j) {
    const double r_lo = r_in + dr * static_cast<double>(j);
    const auto around = cells(2.0 * kPi * (r_lo + dr), spacing);
    const double dphi = 2.0 * kPi / static_cast<double>(around);
    for (std::size_t i = 0; i < around; ++i) {
      const double r = r_lo + dr * rng.uniform01();
      const double phi = dphi * (static_cast<double>(i) + rng.uniform01());
      emit({r * std::cos(phi), r * std::sin(phi), z}, {0.0, 0.0, 1.0}, z);
    }
  }
}

void sample_sphere(Emitter& emit, double radius) {
  const double spacing = emit.spacing();
  auto& rng = emit.rng();
  const auto bands = cells(kPi * radius, spacing);
  const double dtheta = kPi / static_cast<double>(bands);
  for (std::size_t j = 0; j < bands; ++j) {
    const double lo = dtheta * static_cast<double>(j);
    const double hi = lo + dtheta;
    const double widest = (lo <= kPi / 2 && hi >= kPi / 2) ? 1.0 : std::max(std::sin(lo), std::sin(hi));
    const auto around = cells(2.0 * kPi * radius * widest, spacing);
    const double dphi = 2.0 * kPi / static_cast<double>(around);
    for (std::size_t i = 0; i < around; ++i) {
      const double theta = lo + dtheta * rng.uniform01();
      const double phi = dphi * (static_cast<double>(i) + rng.uniform01());
      const Point3 n{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                     std::cos(theta)};
      emit(scale(n, radius), n, radius * n.z);
    }
  }
}

struct Segment2 {
  double ax, ay, bx, by;
};

std::vector<Segment2> profile_segments(ClassLabel label, const ProfileDims& d) {
  const double h = d.height, w = d.width;
  switch (label) {
    case ClassLabel::ibeam:
      return {{0, -h / 2, 0, h / 2}, {-w / 2, h / 2, w / 2, h / 2}, {-w / 2, -h / 2, w / 2, -h / 2}};
    case ClassLabel::channel:
      return {{0, -h / 2, 0, h / 2}, {0, h / 2, w, h / 2}, {0, -h / 2, w, -h / 2}};
    case ClassLabel::angle:
      return {{0, 0, 0, h}, {0, 0, w, 0}};
    default:
      throw std::invalid_argument("not a profile class");
  }
}

void sample_profile(Emitter& emit, ClassLabel label, const ProfileDims& d) {
  for (const auto& s : profile_segments(label, d)) {
    const double dx = s.bx - s.ax, dy = s.by - s.ay;
    const double len = std::hypot(dx, dy);
    const Point3 n{-dy / len, dx / len, 0.0};
    jittered_grid(len, d.length, emit.spacing(), emit.rng(), [&](double u, double v) {
      const double t = u / len;
      emit({s.ax + t * dx, s.ay + t * dy, v}, n, v);
    });
  }
}

void sample_box(Emitter& emit, const BoxDims& d) {
  const double hx = d.width / 2, hy = d.height / 2, len = d.length;
  auto& rng = emit.rng();
  const double sp = emit.spacing();
  for (const double sx : {-1.0, 1.0}) {
    jittered_grid(d.height, len, sp, rng, [&](double u, double v) {
      emit({sx * hx, -hy + u, v}, {sx, 0, 0}, v);
    });
  }
  for (const double sy : {-1.0, 1.0}) {
    jittered_grid(d.width, len, sp, rng, [&](double u, double v) {
      emit({-hx + u, sy * hy, v}, {0, sy, 0}, v);
    });
  }
  for (const double z : {0.0, len}) {
    jittered_grid(d.width, d.height, sp, rng, [&](double u, double v) {
      emit({-hx + u, -hy + v, z}, {0, 0, z == 0.0 ? -1.0 : 1.0}, z);
    });
  }
}

}  // namespace

void ShapeSpec::validate() const {
  require(positive(density), "density must be positive");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be non-negative");
  require(is_finite(pose.position), "pose position must be finite");
  require(norm(pose.axis) > 0.0 && is_finite(pose.axis), "pose axis must be nonzero");
  for (const auto& g : gaps) {
    require(std::isfinite(g.begin) && std::isfinite(g.end) && g.begin < g.end,
            "gap must satisfy begin < end");
  }
  switch (label) {
    case ClassLabel::cylinder: {
      const auto* d = std::get_if<CylinderDims>(&dims);
      require(d != nullptr, "cylinder needs cylinder dimensions");
      require(positive(d->radius) && positive(d->length), "cylinder dimensions must be positive");
      break;
    }
    case ClassLabel::elbow: {
      const auto* d = std::get_if<ElbowDims>(&dims);
      require(d != nullptr, "elbow needs elbow dimensions");
      require(positive(d->tube_radius) && positive(d->bend_radius), "elbow radii must be positive");
      require(d->tube_radius < d->bend_radius, "elbow tube radius must be below bend radius");
      require(d->sweep_deg > 0.0 && d->sweep_deg <= 360.0, "elbow sweep must be in (0, 360]");
      break;
    }
    case ClassLabel::angle:
    case ClassLabel::channel:
    case ClassLabel::ibeam: {
      const auto* d = std::get_if<ProfileDims>(&dims);
      require(d != nullptr, "profile class needs profile dimensions");
      require(positive(d->height) && positive(d->width) && positive(d->length),
              "profile dimensions must be positive");
      break;
    }
    case ClassLabel::flange: {
      const auto* d = std::get_if<FlangeDims>(&dims);
      require(d != nullptr, "flange needs flange dimensions");
      require(positive(d->inner_radius) && positive(d->collar_length),
              "flange dimensions must be positive");
      require(d->inner_radius < d->outer_radius, "flange inner radius must be below outer radius");
      require(d->collar_radius >= d->inner_radius && d->collar_radius <= d->outer_radius,
              "flange collar radius must lie between inner and outer radius");
      break;
    }
    case ClassLabel::valve: {
      const auto* d = std::get_if<ValveDims>(&dims);
      require(d != nullptr, "valve needs valve dimensions");
      require(positive(d->body_radius) && positive(d->stem_radius) && positive(d->stem_length) &&
                  positive(d->wheel_radius) && positive(d->wheel_tube_radius),
              "valve dimensions must be positive");
      require(d->stem_radius < d->body_radius, "valve stem must be narrower than the body");
      require(d->wheel_radius - d->wheel_tube_radius > d->stem_radius,
              "valve handwheel must clear the stem");
      break;
    }
    case ClassLabel::other: {
      const auto* d = std::get_if<BoxDims>(&dims);
      require(d != nullptr, "other needs box dimensions");
      require(positive(d->width) && positive(d->height) && positive(d->length),
              "box dimensions must be positive");
      break;
    }
  }
}

void SceneSpec::validate() const {
  for (const auto& s : shapes) s.validate();
  if (clutter.count > 0) {
    require(is_finite(clutter.min) && is_finite(clutter.max), "clutter box must be finite");
    require(clutter.min.x <= clutter.max.x && clutter.min.y <= clutter.max.y &&
                clutter.min.z <= clutter.max.z,
            "clutter box min must not exceed max");
  }
}

std::vector<Point3> sample_shape(const ShapeSpec& shape, std::uint64_t seed) {
  shape.validate();
  CounterRng rng(seed);
  std::vector<Point3> out;
  Emitter emit(shape, rng, out);
  switch (shape.label) {
    case ClassLabel::cylinder: {
      const auto& d = std::get<CylinderDims>(shape.dims);
      sample_cylinder(emit, d.radius, 0.0, d.length);
      break;
    }
    case ClassLabel::elbow: {
      const auto& d = std::get<ElbowDims>(shape.dims);
      sample_torus(emit, d.tube_radius, d.bend_radius, d.sweep_deg * kPi / 180.0, 0.0, true);
      break;
    }
    case ClassLabel::angle:
    case ClassLabel::channel:
    case ClassLabel::ibeam:
      sample_profile(emit, shape.label, std::get<ProfileDims>(shape.dims));
      break;
    case ClassLabel::flange: {
      const auto& d = std::get<FlangeDims>(shape.dims);
      sample_annulus(emit, d.inner_radius, d.outer_radius, 0.0);
      sample_cylinder(emit, d.collar_radius, 0.0, d.collar_length);
      break;
    }
    case ClassLabel::valve: {
      const auto& d = std::get<ValveDims>(shape.dims);
      const double stem_base =
          std::sqrt(d.body_radius * d.body_radius - d.stem_radius * d.stem_radius);
      const double top = d.body_radius + d.stem_length;
      sample_sphere(emit, d.body_radius);
      sample_cylinder(emit, d.stem_radius, stem_base, top);
      sample_annulus(emit, d.stem_radius, d.wheel_radius - d.wheel_tube_radius, top);
      sample_torus(emit, d.wheel_tube_radius, d.wheel_radius, 2.0 * kPi, top, false);
      break;
    }
    case ClassLabel::other:
      sample_box(emit, std::get<BoxDims>(shape.dims));
      break;
  }
  return out;
}

LabeledPointCloud generate_scene(const SceneSpec& spec) {
  spec.validate();
  std::vector<PointRecord> records;
  for (std::size_t s = 0; s < spec.shapes.size(); ++s) {
    const auto& shape = spec.shapes[s];
    const auto points = sample_shape(shape, CounterRng::derive(spec.seed, s).key());
    for (const auto& p : points) {
      records.push_back({p, shape.label, static_cast<InstanceId>(s), false, std::nullopt});
    }
  }
  if (spec.clutter.count > 0) {
    auto rng = CounterRng::derive(spec.seed, spec.shapes.size());
    const auto id = static_cast<InstanceId>(spec.shapes.size());
    const auto& box = spec.clutter;
    for (std::size_t k = 0; k < box.count; ++k) {
      const Point3 p{rng.uniform(box.min.x, box.max.x), rng.uniform(box.min.y, box.max.y),
                     rng.uniform(box.min.z, box.max.z)};
      records.push_back({p, ClassLabel::other, id, false, std::nullopt});
    }
  }
  return LabeledPointCloud(std::move(records));
}

Point3 to_local(const Pose& pose, const Point3& world) {
  const auto r = rotation_onto(pose.axis);
  return r.apply_transpose({world.x - pose.position.x, world.y - pose.position.y,
                            world.z - pose.position.z});
}

double axial_coordinate(const ShapeSpec& shape, const Point3& world) {
  const auto local = to_local(shape.pose, world);
  if (const auto* d = std::get_if<ElbowDims>(&shape.dims)) {
    double alpha = std::atan2(local.y, local.x);
    if (alpha < 0.0) alpha += 2.0 * kPi;
    return d->bend_radius * alpha;
  }
  return local.z;
}

SceneSpec tile_scene(const SceneSpec& spec, std::size_t nx, std::size_t ny, double pitch) {
  require(nx > 0 && ny > 0 && positive(pitch), "tiling needs positive counts and pitch");
  SceneSpec out;
  out.seed = spec.seed;
  out.declared_min_gap = spec.declared_min_gap;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Point3 shift{pitch * static_cast<double>(ix), pitch * static_cast<double>(iy), 0.0};
      for (auto shape : spec.shapes) {
        shape.pose.position = add(shape.pose.position, shift);
        out.shapes.push_back(std::move(shape));
      }
    }
  }
  if (spec.clutter.count > 0) {
    out.clutter.count = spec.clutter.count * nx * ny;
    out.clutter.min = spec.clutter.min;
    out.clutter.max = add(spec.clutter.max, {pitch * static_cast<double>(nx - 1),
                                             pitch * static_cast<double>(ny - 1), 0.0});
  }
  return out;
}

}  // namespace cloiseg::synth
