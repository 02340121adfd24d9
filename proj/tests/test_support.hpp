#pragma once

// Shared generators and statistics for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lidopt/raycast.hpp"
#include "lidopt/rng.hpp"
#include "lidopt/scene.hpp"
#include "lidopt/types.hpp"

namespace lidopt::testing {

inline Vehicle random_vehicle(SeededRng& rng, int id, double spread = 25.0) {
  Vehicle v;
  v.id = id;
  v.length = rng.uniform(3.0, 12.0);
  v.width = rng.uniform(1.5, 2.6);
  v.height = rng.uniform(1.2, 3.8);
  v.heading_rad = normalize_heading(rng.uniform(-4.0, 4.0));
  v.center = Vec3(rng.uniform(-spread, spread), rng.uniform(-spread, spread),
                  v.height / 2.0);
  return v;
}

inline ScenarioFrame random_frame(SeededRng& rng, long frame_id, int n_vehicles,
                                  double spread = 25.0) {
  ScenarioFrame frame;
  frame.frame_id = frame_id;
  for (int i = 0; i < n_vehicles; ++i)
    frame.vehicles.push_back(random_vehicle(rng, i, spread));
  return frame;
}

/// Five straight lanes on the -y side of the mount, vehicles with default
/// dims heading along +x. Two vehicles that land in one lane are spread
/// apart so boxes stay disjoint.
inline Scenario make_lane_scenario(int n_frames, int per_frame,
                                   std::uint64_t seed) {
  SeededRng rng(seed);
  Scenario scenario;
  scenario.source = "synthetic-5lane";
  for (int f = 0; f < n_frames; ++f) {
    ScenarioFrame frame;
    frame.frame_id = f;
    for (int i = 0; i < per_frame; ++i) {
      Vehicle v;
      v.id = i;
      const int lane = rng.below(5);
      const double y = -(4.0 + 3.75 * (lane + 0.5));
      double x = rng.uniform(-35.0, 35.0);
      for (const Vehicle& other : frame.vehicles)
        if (std::abs(other.center.y() - y) < 1e-9 &&
            std::abs(other.center.x() - x) < 6.0)
          x += (x < other.center.x() ? -6.0 : 6.0);
      v.center = Vec3(x, y, v.height / 2.0);
      frame.vehicles.push_back(v);
    }
    scenario.frames.push_back(frame);
  }
  return scenario;
}

/// Spearman rank correlation with average ranks on ties.
inline double spearman(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const size_t n = x.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
      i = j + 1;
    }
    return rank;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (rx[i] - mean) * (ry[i] - mean);
    dx += (rx[i] - mean) * (rx[i] - mean);
    dy += (ry[i] - mean) * (ry[i] - mean);
  }
  return num / std::sqrt(dx * dy);
}

/// Points scattered on the box surface, labeled with the vehicle id. Stands
/// in for the ray caster where only the metric is under test.
inline void scatter_surface_points(SeededRng& rng, const Vehicle& v, int count,
                                   LabeledPointCloud& cloud) {
  const Mat3 rot = yaw_rotation(v.heading_rad);
  const Vec3 half(v.length / 2.0, v.width / 2.0, v.height / 2.0);
  const double areas[3] = {v.width * v.height, v.length * v.height,
                           v.length * v.width};
  const double total = 2.0 * (areas[0] + areas[1] + areas[2]);
  for (int i = 0; i < count; ++i) {
    const double pick = rng.uniform(0.0, total);
    int axis = 0;
    double acc = 2.0 * areas[0];
    while (axis < 2 && pick >= acc) acc += 2.0 * areas[++axis];
    const double side = rng.u01() < 0.5 ? -1.0 : 1.0;
    Vec3 local;
    local[axis] = side * half[axis];
    local[(axis + 1) % 3] =
        rng.uniform(-half[(axis + 1) % 3], half[(axis + 1) % 3]);
    local[(axis + 2) % 3] =
        rng.uniform(-half[(axis + 2) % 3], half[(axis + 2) % 3]);
    LabeledPoint p;
    p.position = v.center + rot * local;
    p.vehicle_id = v.id;
    p.beam_index = 0;
    p.azimuth_index = i;
    p.range = p.position.norm();
    cloud.points.push_back(p);
  }
}

}  // namespace lidopt::testing
