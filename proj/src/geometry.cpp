#include "lidopt/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace lidopt {

void LidarModel::validate() const {
  if (vertical_angles_deg.empty())
    throw std::invalid_argument("lidar model '" + name + "': no vertical angles");
  for (std::size_t i = 0; i < vertical_angles_deg.size(); ++i) {
    const double a = vertical_angles_deg[i];
    if (!(a > -90.0 && a < 90.0))
      throw std::invalid_argument("lidar model '" + name +
                                  "': vertical angle out of (-90, 90): " +
                                  std::to_string(a));
    if (i > 0 && !(vertical_angles_deg[i] > vertical_angles_deg[i - 1]))
      throw std::invalid_argument("lidar model '" + name +
                                  "': vertical angles must be strictly increasing");
  }
  if (!(horizontal_resolution_deg > 0.0))
    throw std::invalid_argument("lidar model '" + name +
                                "': horizontal resolution must be positive");
  const double steps = 360.0 / horizontal_resolution_deg;
  if (std::abs(steps - std::round(steps)) * horizontal_resolution_deg > 1e-9)
    throw std::invalid_argument("lidar model '" + name +
                                "': horizontal resolution must divide 360");
  if (!(min_range_m >= 0.0) || !(min_range_m < max_range_m))
    throw std::invalid_argument("lidar model '" + name +
                                "': require 0 <= min_range < max_range");
}

RaySet deploy_rays(const LidarModel& model, const Deployment& deployment) {
  model.validate();
  const int n_beams = model.beam_count();
  const int n_az = model.azimuth_steps();
  const double az_step = deg2rad(model.horizontal_resolution_deg);

  Mat3X local(3, static_cast<Index>(n_beams) * n_az);
  for (int b = 0; b < n_beams; ++b) {
    const double elevation = deg2rad(model.vertical_angles_deg[b]);
    for (int a = 0; a < n_az; ++a) {
      local.col(static_cast<Index>(b) * n_az + a) =
          beam_direction(a * az_step, elevation);
    }
  }

  RaySet rays;
  rays.origin = deployment.position;
  rays.directions = deployment.tilt() * local;
  rays.beam_count = n_beams;
  rays.azimuth_count = n_az;
  return rays;
}

}  // namespace lidopt
