#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lidopt/types.hpp"

namespace lidopt {

/// Unit direction of one laser sample. Azimuth is measured from +Y toward +X
/// (compass style), elevation from the horizontal plane. Angles in radians.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> beam_direction(Scalar azimuth, Scalar elevation) {
  using std::cos;
  using std::sin;
  return {sin(azimuth) * cos(elevation), cos(azimuth) * cos(elevation),
          sin(elevation)};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_x(Scalar angle) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(angle), s = sin(angle);
  Eigen::Matrix<Scalar, 3, 3> m;
  m << Scalar(1), Scalar(0), Scalar(0),
       Scalar(0), c, -s,
       Scalar(0), s, c;
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_y(Scalar angle) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(angle), s = sin(angle);
  Eigen::Matrix<Scalar, 3, 3> m;
  m << c, Scalar(0), s,
       Scalar(0), Scalar(1), Scalar(0),
       -s, Scalar(0), c;
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_z(Scalar angle) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(angle), s = sin(angle);
  Eigen::Matrix<Scalar, 3, 3> m;
  m << c, -s, Scalar(0),
       s, c, Scalar(0),
       Scalar(0), Scalar(0), Scalar(1);
  return m;
}

/// Sensor tilt: rotation about X composed with rotation about Y, in exactly
/// that order. Applied to beam directions as column vectors.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> tilt_matrix(Scalar tilt_x, Scalar tilt_y) {
  return rotation_x(tilt_x) * rotation_y(tilt_y);
}

/// Intrinsic geometry of a mechanical rotating sensor. Angles are stored in
/// degrees; conversion to radians happens where directions are generated.
struct LidarModel {
  std::string name;
  std::vector<double> vertical_angles_deg;  // sorted ascending, no duplicates
  double horizontal_resolution_deg = 0.2;
  double min_range_m = 0.0;
  double max_range_m = 100.0;

  int beam_count() const { return static_cast<int>(vertical_angles_deg.size()); }

  /// Rays per revolution per beam; the resolution must divide 360.
  int azimuth_steps() const {
    return static_cast<int>(std::lround(360.0 / horizontal_resolution_deg));
  }

  /// Throws std::invalid_argument when any field is out of contract.
  void validate() const;
};

/// Mount pose: position plus tilt about X and Y. position.z() is the mount
/// height above the ground plane.
struct Deployment {
  Vec3 position{0.0, 0.0, 0.0};
  double tilt_x_deg = 0.0;
  double tilt_y_deg = 0.0;

  Mat3 tilt() const { return tilt_matrix(deg2rad(tilt_x_deg), deg2rad(tilt_y_deg)); }
};

/// One revolution of deployed beams. All rays share the mount point as
/// origin; directions are unit column vectors ordered beam-major.
struct RaySet {
  Vec3 origin = Vec3::Zero();
  Mat3X directions;
  int beam_count = 0;
  int azimuth_count = 0;

  Index ray_count() const { return directions.cols(); }
  Index ray_index(int beam, int azimuth) const {
    return static_cast<Index>(beam) * azimuth_count + azimuth;
  }
};

/// Expands a model at a deployment into world-frame rays, one per
/// (vertical angle, azimuth step) pair. A target at distance d along ray r is
/// reconstructed as origin + d * direction.
RaySet deploy_rays(const LidarModel& model, const Deployment& deployment);

}  // namespace lidopt
