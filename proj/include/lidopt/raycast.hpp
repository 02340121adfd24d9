#pragma once

#include <optional>
#include <vector>

#include "lidopt/geometry.hpp"
#include "lidopt/scene.hpp"
#include "lidopt/types.hpp"

namespace lidopt {

/// Label for returns off the ground plane z=0.
inline constexpr int kGroundId = -1;

struct LabeledPoint {
  Vec3 position = Vec3::Zero();
  int vehicle_id = kGroundId;
  int beam_index = 0;
  int azimuth_index = 0;
  double range = 0.0;
};

struct LabeledPointCloud {
  long frame_id = 0;
  std::vector<LabeledPoint> points;  // ordered by (beam_index, azimuth_index)
};

struct CastOptions {
  bool include_ground_points = true;
};

/// Slab intersection against an oriented box. Returns the smallest t >= 0
/// where the ray enters the box (0 when the origin is inside), or nothing.
std::optional<double> ray_obb_intersect(const Vec3& origin, const Vec3& direction,
                                        const Vehicle& vehicle);

/// Casts one RaySet against scenario frames with nearest-hit occlusion.
/// Rays are bucketed by world azimuth once per RaySet so each vehicle only
/// tests the rays inside its angular footprint.
class FrameCaster {
 public:
  FrameCaster(const RaySet& rays, const LidarModel& model);

  LabeledPointCloud cast(const ScenarioFrame& frame,
                         const CastOptions& options = {});

 private:
  RaySet rays_;
  double min_range_;
  double max_range_;
  double bucket_width_;
  int bucket_count_;
  std::vector<int> bucket_start_;  // CSR offsets, size bucket_count_ + 1
  std::vector<int> bucket_rays_;   // ray indices grouped by azimuth bucket
  std::vector<double> best_t_;     // per-ray scratch
  std::vector<int> best_id_;
};

/// One-shot convenience over FrameCaster.
LabeledPointCloud cast_frame(const RaySet& rays, const ScenarioFrame& frame,
                             const LidarModel& model,
                             const CastOptions& options = {});

std::vector<LabeledPoint> vehicle_points(const LabeledPointCloud& cloud,
                                         int vehicle_id);

}  // namespace lidopt
