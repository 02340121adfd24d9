#include "lidopt/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lidopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNoHit = std::numeric_limits<int>::min();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Box pose folded into the form the slab test wants: the ray is moved into
/// the box frame once per (ray, box) pair via one 3x3 multiply.
struct BoxFrame {
  Mat3 rot_t;
  Vec3 center;
  Vec3 half;

  explicit BoxFrame(const Vehicle& v)
      : rot_t(yaw_rotation(v.heading_rad).transpose()),
        center(v.center),
        half(v.length / 2.0, v.width / 2.0, v.height / 2.0) {}
};

std::optional<double> slab_entry(const BoxFrame& box, const Vec3& origin,
                                 const Vec3& direction) {
  const Vec3 o = box.rot_t * (origin - box.center);
  const Vec3 d = box.rot_t * direction;
  double t_enter = -kInf;
  double t_exit = kInf;
  for (int axis = 0; axis < 3; ++axis) {
    const double h = box.half[axis];
    if (d[axis] == 0.0) {
      if (o[axis] < -h || o[axis] > h) return std::nullopt;
      continue;
    }
    double t1 = (-h - o[axis]) / d[axis];
    double t2 = (h - o[axis]) / d[axis];
    if (t1 > t2) std::swap(t1, t2);
    t_enter = std::max(t_enter, t1);
    t_exit = std::min(t_exit, t2);
    if (t_enter > t_exit) return std::nullopt;
  }
  if (t_exit < 0.0) return std::nullopt;
  return std::max(t_enter, 0.0);
}

double wrap_to_2pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

/// Signed smallest difference a - b in (-pi, pi].
double angle_delta(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  if (d > std::numbers::pi) d -= kTwoPi;
  return d;
}

double azimuth_of(const Vec3& v) { return std::atan2(v.x(), v.y()); }

double ground_t(const Vec3& origin, const Vec3& direction) {
  if (direction.z() == 0.0) return kInf;
  const double t = -origin.z() / direction.z();
  return t >= 0.0 ? t : kInf;
}

}  // namespace

std::optional<double> ray_obb_intersect(const Vec3& origin, const Vec3& direction,
                                        const Vehicle& vehicle) {
  return slab_entry(BoxFrame(vehicle), origin, direction);
}

FrameCaster::FrameCaster(const RaySet& rays, const LidarModel& model)
    : rays_(rays),
      min_range_(model.min_range_m),
      max_range_(model.max_range_m),
      bucket_count_(std::max(rays.azimuth_count, 1)) {
  bucket_width_ = kTwoPi / bucket_count_;
  const Index n = rays_.ray_count();
  std::vector<int> bucket_of(n);
  std::vector<int> counts(bucket_count_, 0);
  for (Index r = 0; r < n; ++r) {
    const double az = wrap_to_2pi(azimuth_of(rays_.directions.col(r)));
    int b = static_cast<int>(az / bucket_width_);
    if (b >= bucket_count_) b = bucket_count_ - 1;
    bucket_of[r] = b;
    ++counts[b];
  }
  bucket_start_.assign(bucket_count_ + 1, 0);
  for (int b = 0; b < bucket_count_; ++b)
    bucket_start_[b + 1] = bucket_start_[b] + counts[b];
  bucket_rays_.resize(n);
  std::vector<int> cursor(bucket_start_.begin(), bucket_start_.end() - 1);
  for (Index r = 0; r < n; ++r)
    bucket_rays_[cursor[bucket_of[r]]++] = static_cast<int>(r);
  best_t_.resize(n);
  best_id_.resize(n);
}

LabeledPointCloud FrameCaster::cast(const ScenarioFrame& frame,
                                    const CastOptions& options) {
  const Index n = rays_.ray_count();
  std::fill(best_t_.begin(), best_t_.end(), kInf);
  std::fill(best_id_.begin(), best_id_.end(), kNoHit);

  for (const Vehicle& vehicle : frame.vehicles) {
    const BoxFrame box(vehicle);

    // Conservative azimuth window of the footprint as seen from the origin.
    int b_lo = 0;
    int b_hi = bucket_count_ - 1;
    const Vec3 local_origin = box.rot_t * (rays_.origin - box.center);
    const bool origin_in_footprint =
        std::abs(local_origin.x()) <= box.half.x() + 1e-12 &&
        std::abs(local_origin.y()) <= box.half.y() + 1e-12;
    if (!origin_in_footprint) {
      const Vec3 to_center = vehicle.center - rays_.origin;
      const double az_center = azimuth_of(to_center);
      const Mat3 rot = yaw_rotation(vehicle.heading_rad);
      double max_delta = 0.0;
      for (int i = 0; i < 4; ++i) {
        const Vec3 corner_offset =
            rot * Vec3((i & 1) ? box.half.x() : -box.half.x(),
                       (i & 2) ? box.half.y() : -box.half.y(), 0.0);
        const double az = azimuth_of(to_center + corner_offset);
        max_delta = std::max(max_delta, std::abs(angle_delta(az, az_center)));
      }
      const double lo = az_center - max_delta - bucket_width_;
      const double hi = az_center + max_delta + bucket_width_;
      b_lo = static_cast<int>(std::floor(lo / bucket_width_));
      b_hi = static_cast<int>(std::floor(hi / bucket_width_));
      if (b_hi - b_lo + 1 >= bucket_count_) {
        b_lo = 0;
        b_hi = bucket_count_ - 1;
      }
    }

    for (int b = b_lo; b <= b_hi; ++b) {
      const int bucket = ((b % bucket_count_) + bucket_count_) % bucket_count_;
      for (int k = bucket_start_[bucket]; k < bucket_start_[bucket + 1]; ++k) {
        const int r = bucket_rays_[k];
        const auto t = slab_entry(box, rays_.origin, rays_.directions.col(r));
        if (!t) continue;
        if (*t < best_t_[r] ||
            (*t == best_t_[r] && vehicle.id < best_id_[r])) {
          best_t_[r] = *t;
          best_id_[r] = vehicle.id;
        }
      }
    }
  }

  LabeledPointCloud cloud;
  cloud.frame_id = frame.frame_id;
  for (Index r = 0; r < n; ++r) {
    const Vec3 dir = rays_.directions.col(r);
    const double t_ground = ground_t(rays_.origin, dir);
    double t = best_t_[r];
    int id = best_id_[r];
    if (t_ground < t) {
      t = t_ground;
      id = kGroundId;
    }
    if (t == kInf) continue;
    if (t < min_range_ || t > max_range_) continue;
    if (id == kGroundId && !options.include_ground_points) continue;
    LabeledPoint point;
    point.position = rays_.origin + t * dir;
    point.vehicle_id = id;
    point.beam_index = static_cast<int>(r / rays_.azimuth_count);
    point.azimuth_index = static_cast<int>(r % rays_.azimuth_count);
    point.range = t;
    cloud.points.push_back(point);
  }
  return cloud;
}

LabeledPointCloud cast_frame(const RaySet& rays, const ScenarioFrame& frame,
                             const LidarModel& model,
                             const CastOptions& options) {
  FrameCaster caster(rays, model);
  return caster.cast(frame, options);
}

std::vector<LabeledPoint> vehicle_points(const LabeledPointCloud& cloud,
                                         int vehicle_id) {
  std::vector<LabeledPoint> out;
  for (const auto& p : cloud.points)
    if (p.vehicle_id == vehicle_id) out.push_back(p);
  return out;
}

}  // namespace lidopt
