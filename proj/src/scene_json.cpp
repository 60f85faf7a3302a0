#include <stdexcept>
#include <string>

#include "cloiseg/synth.hpp"
#include "json.hpp"

namespace cloiseg::synth {

namespace {

using nlohmann::json;

json point_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

Point3 point_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument(std::string(what) + " must be an array of 3 numbers");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json dims_json(const ShapeDims& dims) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, CylinderDims>) {
          return {{"radius", d.radius}, {"length", d.length}};
        } else if constexpr (std::is_same_v<T, ElbowDims>) {
          return {{"tube_radius", d.tube_radius},
                  {"bend_radius", d.bend_radius},
                  {"sweep_deg", d.sweep_deg}};
        } else if constexpr (std::is_same_v<T, ProfileDims>) {
          return {{"height", d.height}, {"width", d.width}, {"length", d.length}};
        } else if constexpr (std::is_same_v<T, FlangeDims>) {
          return {{"inner_radius", d.inner_radius},
                  {"outer_radius", d.outer_radius},
                  {"collar_radius", d.collar_radius},
                  {"collar_length", d.collar_length}};
        } else if constexpr (std::is_same_v<T, ValveDims>) {
          return {{"body_radius", d.body_radius},
                  {"stem_radius", d.stem_radius},
                  {"stem_length", d.stem_length},
                  {"wheel_radius", d.wheel_radius},
                  {"wheel_tube_radius", d.wheel_tube_radius}};
        } else {
          return {{"width", d.width}, {"height", d.height}, {"length", d.length}};
        }
      },
      dims);
}

// Missing keys keep the struct defaults.
template <class T>
void read_field(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

ShapeDims dims_from(ClassLabel label, const json& j) {
  switch (label) {
    case ClassLabel::cylinder: {
      CylinderDims d;
      read_field(j, "radius", d.radius);
      read_field(j, "length", d.length);
      return d;
    }
    case ClassLabel::elbow: {
      ElbowDims d;
      read_field(j, "tube_radius", d.tube_radius);
      read_field(j, "bend_radius", d.bend_radius);
      read_field(j, "sweep_deg", d.sweep_deg);
      return d;
    }
    case ClassLabel::angle:
    case ClassLabel::channel:
    case ClassLabel::ibeam: {
      ProfileDims d;
      read_field(j, "height", d.height);
      read_field(j, "width", d.width);
      read_field(j, "length", d.length);
      return d;
    }
    case ClassLabel::flange: {
      FlangeDims d;
      read_field(j, "inner_radius", d.inner_radius);
      read_field(j, "outer_radius", d.outer_radius);
      read_field(j, "collar_radius", d.collar_radius);
      read_field(j, "collar_length", d.collar_length);
      return d;
    }
    case ClassLabel::valve: {
      ValveDims d;
      read_field(j, "body_radius", d.body_radius);
      read_field(j, "stem_radius", d.stem_radius);
      read_field(j, "stem_length", d.stem_length);
      read_field(j, "wheel_radius", d.wheel_radius);
      read_field(j, "wheel_tube_radius", d.wheel_tube_radius);
      return d;
    }
    case ClassLabel::other: {
      BoxDims d;
      read_field(j, "width", d.width);
      read_field(j, "height", d.height);
      read_field(j, "length", d.length);
      return d;
    }
  }
  throw std::invalid_argument("unknown class");
}

}  // namespace

std::string scene_to_json(const SceneSpec& spec) {
  json shapes = json::array();
  for (const auto& s : spec.shapes) {
    json gaps = json::array();
    for (const auto& g : s.gaps) gaps.push_back(json::array({g.begin, g.end}));
    shapes.push_back({{"class", std::string(class_name(s.label))},
                      {"position", point_json(s.pose.position)},
                      {"axis", point_json(s.pose.axis)},
                      {"dimensions", dims_json(s.dims)},
                      {"density", s.density},
                      {"sigma", s.sigma},
                      {"gaps", gaps}});
  }
  const json doc = {{"seed", spec.seed},
                    {"declared_min_gap", spec.declared_min_gap},
                    {"clutter",
                     {{"count", spec.clutter.count},
                      {"min", point_json(spec.clutter.min)},
                      {"max", point_json(spec.clutter.max)}}},
                    {"shapes", shapes}};
  return doc.dump(2) + "\n";
}

SceneSpec scene_from_json(std::string_view text) {
  SceneSpec spec;
  try {
    const json doc = json::parse(text);
    read_field(doc, "seed", spec.seed);
    read_field(doc, "declared_min_gap", spec.declared_min_gap);
    if (doc.contains("clutter")) {
      const auto& c = doc.at("clutter");
      read_field(c, "count", spec.clutter.count);
      if (c.contains("min")) spec.clutter.min = point_from(c.at("min"), "clutter.min");
      if (c.contains("max")) spec.clutter.max = point_from(c.at("max"), "clutter.max");
    }
    for (const auto& js : doc.value("shapes", json::array())) {
      ShapeSpec s;
      const auto name = js.at("class").get<std::string>();
      const auto label = class_from_name(name);
      if (!label) throw std::invalid_argument("unknown class '" + name + "'");
      s.label = *label;
      if (js.contains("position")) s.pose.position = point_from(js.at("position"), "position");
      if (js.contains("axis")) s.pose.axis = point_from(js.at("axis"), "axis");
      s.dims = dims_from(s.label, js.value("dimensions", json::object()));
      read_field(js, "density", s.density);
      read_field(js, "sigma", s.sigma);
      for (const auto& g : js.value("gaps", json::array())) {
        if (!g.is_array() || g.size() != 2) {
          throw std::invalid_argument("gap must be [begin, end]");
        }
        s.gaps.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
      }
      spec.shapes.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string manifest_to_json(const SceneManifest& m) {
  const json doc = {{"profile", m.profile},
                    {"name", m.name},
                    {"min_inter_gap", m.min_inter_gap},
                    {"max_intra_gap", m.max_intra_gap},
                    {"sample_spacing", m.sample_spacing},
                    {"sigma", m.sigma},
                    {"expect_perfect", m.expect_perfect},
                    {"expect_over_segmentation", m.expect_over_segmentation},
                    {"expect_merging", m.expect_merging},
                    {"notes", m.notes}};
  return doc.dump(2) + "\n";
}

}  // namespace cloiseg::synth
