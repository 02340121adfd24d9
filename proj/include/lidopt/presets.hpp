#pragma once

#include <stdexcept>
#include <string>

#include "lidopt/geometry.hpp"

namespace lidopt {

struct PresetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a preset file (JSON object with keys name, vertical_angles,
/// horizontal_resolution_deg, min_range_m, max_range_m) and validates it.
LidarModel load_preset(const std::string& path);

void save_preset(const LidarModel& model, const std::string& path);

/// Built-in models matching the shipped preset files.
/// RS-16 and RS-32 are uniform over their vertical field of view; RS-80
/// approximates the real unit's uneven beam table with a denser band near
/// the horizon.
LidarModel make_rs16();
LidarModel make_rs32();
LidarModel make_rs80();

}  // namespace lidopt
