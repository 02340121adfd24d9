#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numbers>
#include <set>

#include "lidopt/presets.hpp"
#include "lidopt/raycast.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace lidopt;

namespace {

constexpr double kPi = std::numbers::pi;

LidarModel fan_model(double min_range = 0.0, double max_range = 100.0) {
  LidarModel model;
  model.name = "fan";
  model.vertical_angles_deg = {-24.0, -17.0, -11.0, -6.0, -2.0, 0.0, 3.0, 9.0};
  model.horizontal_resolution_deg = 1.0;
  model.min_range_m = min_range;
  model.max_range_m = max_range;
  return model;
}

Vehicle box_at(int id, double x, double y, double heading = 0.0,
               double l = 2.0, double w = 2.0, double h = 2.0) {
  Vehicle v;
  v.id = id;
  v.center = Vec3(x, y, h / 2.0);
  v.length = l;
  v.width = w;
  v.height = h;
  v.heading_rad = heading;
  return v;
}

}  // namespace

TEST_CASE("slab intersection basics") {
  const Vehicle target = box_at(0, 0.0, 10.0);
  const Vec3 origin(0, 0, 1);

  SUBCASE("axis aligned hit at t = 9") {
    const auto t = ray_obb_intersect(origin, Vec3(0, 1, 0), target);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(9.0).epsilon(1e-12));
  }
  SUBCASE("miss to the side") {
    CHECK(!ray_obb_intersect(origin, Vec3(0, 1, 0), box_at(0, 10.0, 0.0)));
  }
  SUBCASE("box behind the origin") {
    CHECK(!ray_obb_intersect(origin, Vec3(0, -1, 0), target));
  }
  SUBCASE("origin inside returns zero") {
    const auto t = ray_obb_intersect(Vec3(0, 10, 1), Vec3(0, 1, 0), target);
    REQUIRE(t.has_value());
    CHECK(*t == 0.0);
  }
  SUBCASE("ray parallel to a face outside it misses") {
    CHECK(!ray_obb_intersect(Vec3(0, 0, 5), Vec3(0, 1, 0), target));
  }
}

TEST_CASE("slab entry matches the marching oracle on oblique boxes") {
  SeededRng rng(23);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const Vehicle v = testing::random_vehicle(rng, 0, 12.0);
    const Vec3 origin(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.5, 4));
    const Vec3 toward =
        (v.center - origin + Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                  rng.uniform(-0.5, 0.5)))
            .normalized();
    const auto fast = ray_obb_intersect(origin, toward, v);
    const auto slow = testing::march_ray_entry(origin, toward, v);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      // Marching overshoots by at most one step.
      CHECK(*slow >= *fast - 1e-12);
      CHECK(*slow - *fast < 1e-3);
      ++checked;
    }
  }
  CHECK(checked > 20);

  const Vehicle tilted = box_at(0, 3.0, 8.0, kPi / 4, 4.0, 2.0, 2.0);
  const Vec3 origin(0, 0, 1);
  const Vec3 dir = (tilted.center - origin).normalized();
  const auto fast = ray_obb_intersect(origin, dir, tilted);
  const auto slow = testing::march_ray_entry(origin, dir, tilted);
  REQUIRE(fast.has_value());
  REQUIRE(slow.has_value());
  CHECK(std::abs(*fast - *slow) < 1e-3);
}

TEST_CASE("occlusion keeps the nearer of two aligned boxes") {
  const LidarModel model = fan_model();
  const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 1), 0, 0});
  ScenarioFrame frame;
  frame.frame_id = 0;
  frame.vehicles = {box_at(1, 0.0, -6.0), box_at(2, 0.0, -12.0)};

  // The near box's silhouette covers the far box completely from this
  // origin, so every box hit carries the nearer id.
  const LabeledPointCloud cloud = cast_frame(rays, frame, model);
  CHECK(!vehicle_points(cloud, 1).empty());
  CHECK(vehicle_points(cloud, 2).empty());

  // Alone, the far box does get returns.
  ScenarioFrame alone;
  alone.frame_id = 0;
  alone.vehicles = {box_at(2, 0.0, -12.0)};
  const LabeledPointCloud unblocked = cast_frame(rays, alone, model);
  CHECK(!vehicle_points(unblocked, 2).empty());
}

TEST_CASE("ties between coincident boxes go to the lower id") {
  const LidarModel model = fan_model();
  const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 1), 0, 0});
  ScenarioFrame frame;
  frame.frame_id = 0;
  frame.vehicles = {box_at(3, 0.0, -6.0), box_at(7, 0.0, -6.0)};
  const LabeledPointCloud cloud = cast_frame(rays, frame, model);
  CHECK(!vehicle_points(cloud, 3).empty());
  CHECK(vehicle_points(cloud, 7).empty());
}

TEST_CASE("range window consumes rays instead of passing them through") {
  SUBCASE("box beyond max range yields nothing") {
    const LidarModel model = fan_model(0.0, 10.0);
    const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 1), 0, 0});
    ScenarioFrame frame;
    frame.frame_id = 0;
    frame.vehicles = {box_at(1, 0.0, 40.0)};
    CastOptions no_ground;
    no_ground.include_ground_points = false;
    CHECK(cast_frame(rays, frame, model, no_ground).points.empty());
  }
  SUBCASE("nearer-than-min-range box still blocks a farther one") {
    const LidarModel model = fan_model(3.0, 100.0);
    const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 1), 0, 0});
    ScenarioFrame blocked;
    blocked.frame_id = 0;
    blocked.vehicles = {box_at(1, 0.0, 1.5, 0.0, 1.0, 1.0, 6.0),
                        box_at(2, 0.0, 12.0, 0.0, 2.0, 2.0, 6.0)};
    const LabeledPointCloud cloud = cast_frame(rays, blocked, model);
    CHECK(vehicle_points(cloud, 1).empty());
    // Rays the near box swallowed are dead; box 2 only gets rays that
    // missed box 1 entirely.
    for (const auto& p : vehicle_points(cloud, 2))
      CHECK(!ray_obb_intersect(rays.origin,
                               (p.position - rays.origin).normalized(),
                               blocked.vehicles[0]));
  }
}

TEST_CASE("ground plane terminates downward rays") {
  const LidarModel model = fan_model();
  const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 2), 0, 0});
  ScenarioFrame empty_frame;
  empty_frame.frame_id = 0;

  const LabeledPointCloud with_ground = cast_frame(rays, empty_frame, model);
  CHECK(!with_ground.points.empty());
  for (const auto& p : with_ground.points) {
    CHECK(p.vehicle_id == kGroundId);
    CHECK(std::abs(p.position.z()) < 1e-9);
  }

  CastOptions no_ground;
  no_ground.include_ground_points = false;
  CHECK(cast_frame(rays, empty_frame, model, no_ground).points.empty());
}

TEST_CASE("labeled points satisfy the ray equation and box membership") {
  SeededRng rng(31);
  const LidarModel model = fan_model(0.5, 60.0);
  const RaySet rays =
      deploy_rays(model, Deployment{Vec3(0, 0, 2.5), 4.0, -2.0});
  FrameCaster caster(rays, model);

  for (int trial = 0; trial < 10; ++trial) {
    const ScenarioFrame frame = testing::random_frame(rng, trial, 6, 18.0);
    const LabeledPointCloud cloud = caster.cast(frame);
    std::set<std::pair<int, int>> keys;
    for (const auto& p : cloud.points) {
      CHECK(keys.insert({p.beam_index, p.azimuth_index}).second);
      const Vec3 expected =
          rays.origin +
          p.range * rays.directions.col(rays.ray_index(p.beam_index,
                                                       p.azimuth_index));
      CHECK((p.position - expected).norm() < 1e-9);
      CHECK(p.range >= model.min_range_m);
      CHECK(p.range <= model.max_range_m);
      if (p.vehicle_id != kGroundId) {
        const auto vehicle =
            std::find_if(frame.vehicles.begin(), frame.vehicles.end(),
                         [&](const Vehicle& v) { return v.id == p.vehicle_id; });
        REQUIRE(vehicle != frame.vehicles.end());
        CHECK(testing::point_in_obb(p.position, *vehicle, 1e-6));
      }
    }
  }
}

TEST_CASE("caster agrees with the all-pairs oracle on random frames") {
  SeededRng rng(47);
  const LidarModel model = fan_model(0.4, 70.0);
  const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 3), 6.0, 1.0});
  FrameCaster caster(rays, model);

  for (int trial = 0; trial < 25; ++trial) {
    const ScenarioFrame frame =
        testing::random_frame(rng, trial, 1 + rng.below(8), 30.0);
    const LabeledPointCloud fast = caster.cast(frame);
    const LabeledPointCloud slow = testing::oracle_cast_frame(rays, frame, model);
    REQUIRE(fast.points.size() == slow.points.size());
    for (size_t i = 0; i < fast.points.size(); ++i) {
      CHECK(fast.points[i].vehicle_id == slow.points[i].vehicle_id);
      CHECK(fast.points[i].beam_index == slow.points[i].beam_index);
      CHECK(fast.points[i].azimuth_index == slow.points[i].azimuth_index);
      CHECK(std::abs(fast.points[i].range - slow.points[i].range) < 1e-6);
    }
  }
}

TEST_CASE("adding a vehicle never increases another vehicle's point count") {
  SeededRng rng(53);
  const LidarModel model = fan_model();
  const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 2), 0, 0});
  FrameCaster caster(rays, model);

  for (int trial = 0; trial < 10; ++trial) {
    ScenarioFrame frame = testing::random_frame(rng, 0, 5, 20.0);
    std::map<int, size_t> before;
    const LabeledPointCloud base = caster.cast(frame);
    for (const Vehicle& v : frame.vehicles)
      before[v.id] = vehicle_points(base, v.id).size();

    frame.vehicles.push_back(testing::random_vehicle(rng, 99, 20.0));
    const LabeledPointCloud extended = caster.cast(frame);
    for (const auto& [id, count] : before)
      CHECK(vehicle_points(extended, id).size() <= count);
  }
}

TEST_CASE("vehicle_points partitions the cloud") {
  SeededRng rng(61);
  const LidarModel model = fan_model();
  const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 2), 3.0, 0.0});
  const ScenarioFrame frame = testing::random_frame(rng, 4, 5, 15.0);
  const LabeledPointCloud cloud = cast_frame(rays, frame, model);

  size_t sum = vehicle_points(cloud, kGroundId).size();
  for (const Vehicle& v : frame.vehicles) sum += vehicle_points(cloud, v.id).size();
  CHECK(sum == cloud.points.size());
  CHECK(vehicle_points(cloud, 424242).empty());
}

TEST_CASE("casting is deterministic") {
  SeededRng rng(71);
  const LidarModel model = make_rs16();
  const RaySet rays = deploy_rays(model, Deployment{Vec3(0, 0, 2.8), 9.0, 0.0});
  const ScenarioFrame frame = testing::random_frame(rng, 1, 7, 25.0);

  FrameCaster a(rays, model), b(rays, model);
  const LabeledPointCloud first = a.cast(frame);
  const LabeledPointCloud second = b.cast(frame);
  const LabeledPointCloud third = a.cast(frame);
  REQUIRE(first.points.size() == second.points.size());
  REQUIRE(first.points.size() == third.points.size());
  for (size_t i = 0; i < first.points.size(); ++i) {
    CHECK(first.points[i].position == second.points[i].position);
    CHECK(first.points[i].range == third.points[i].range);
    CHECK(first.points[i].vehicle_id == second.points[i].vehicle_id);
  }
}
