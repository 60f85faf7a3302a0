#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cloiseg {

/// Position in meters.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3& a, const Point3& b) {
  return std::sqrt(squared_distance(a, b));
}

/// Object category of a point. Codes are fixed and appear verbatim in files.
enum class ClassLabel : std::uint8_t {
  other = 0,
  angle = 1,
  channel = 2,
  cylinder = 3,
  elbow = 4,
  ibeam = 5,
  flange = 6,
  valve = 7,
};

inline constexpr std::size_t kClassCount = 8;

inline constexpr std::array<ClassLabel, kClassCount> kAllClasses = {
    ClassLabel::other,  ClassLabel::angle, ClassLabel::channel,
    ClassLabel::cylinder, ClassLabel::elbow, ClassLabel::ibeam,
    ClassLabel::flange, ClassLabel::valve};

/// The seven modelled object classes; "other" is clutter and is left out of
/// mean metrics.
inline constexpr std::array<ClassLabel, 7> kObjectClasses = {
    ClassLabel::angle, ClassLabel::channel, ClassLabel::cylinder,
    ClassLabel::elbow, ClassLabel::ibeam,   ClassLabel::flange,
    ClassLabel::valve};

constexpr int class_code(ClassLabel c) { return static_cast<int>(c); }

constexpr std::size_t class_index(ClassLabel c) {
  return static_cast<std::size_t>(c);
}

constexpr std::optional<ClassLabel> class_from_code(long long code) {
  if (code < 0 || code >= static_cast<long long>(kClassCount)) {
    return std::nullopt;
  }
  return static_cast<ClassLabel>(code);
}

std::string_view class_name(ClassLabel c);
std::optional<ClassLabel> class_from_name(std::string_view name);

/// Instance identifier. Non-negative ids name instances; kNoise marks points
/// that belong to no predicted instance.
using InstanceId = std::int64_t;
inline constexpr InstanceId kNoise = -1;

}  // namespace cloiseg
