#pragma once

#include <array>
#include <string>
#include <vector>

#include "lidopt/geometry.hpp"
#include "lidopt/types.hpp"

namespace lidopt {

// Dimensions assumed for sources that do not carry them (typical sedan).
inline constexpr double kDefaultVehicleLength = 4.5;
inline constexpr double kDefaultVehicleWidth = 1.8;
inline constexpr double kDefaultVehicleHeight = 1.5;

/// Wraps an angle to [-pi, pi).
double normalize_heading(double radians);

/// Oriented box target. The local +X axis is the forward direction; for
/// vehicles standing on the ground the center sits at z = height / 2.
struct Vehicle {
  int id = 0;
  Vec3 center = Vec3::Zero();
  double length = kDefaultVehicleLength;
  double width = kDefaultVehicleWidth;
  double height = kDefaultVehicleHeight;
  double heading_rad = 0.0;
};

inline Mat3 yaw_rotation(double heading_rad) { return rotation_z(heading_rad); }

/// World-frame box corners. Corner i has local offset sign bits
/// (i & 1 -> +x), (i & 2 -> +y), (i & 4 -> +z).
inline std::array<Vec3, 8> obb_corners(const Vehicle& v) {
  const Mat3 rot = yaw_rotation(v.heading_rad);
  const Vec3 half(v.length / 2.0, v.width / 2.0, v.height / 2.0);
  std::array<Vec3, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const Vec3 local((i & 1) ? half.x() : -half.x(),
                     (i & 2) ? half.y() : -half.y(),
                     (i & 4) ? half.z() : -half.z());
    corners[i] = v.center + rot * local;
  }
  return corners;
}

struct ScenarioFrame {
  long frame_id = 0;
  std::vector<Vehicle> vehicles;  // sorted by id, ids unique within the frame
};

struct Scenario {
  std::vector<ScenarioFrame> frames;  // frame_ids strictly increasing
  std::string source;
};

}  // namespace lidopt
