#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "lidopt/rng.hpp"
#include "lidopt/scene.hpp"
#include "lidopt/scene_io.hpp"
#include "test_support.hpp"

using namespace lidopt;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lidopt_scene_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
};

}  // namespace

TEST_CASE("normalize_heading wraps into [-pi, pi)") {
  CHECK(normalize_heading(0.0) == 0.0);
  CHECK(normalize_heading(kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(normalize_heading(kPi) == doctest::Approx(-kPi));
  CHECK(normalize_heading(3 * kPi) == doctest::Approx(-kPi));
  CHECK(normalize_heading(-kPi / 4) == doctest::Approx(-kPi / 4));
  CHECK(normalize_heading(2 * kPi + 0.3) == doctest::Approx(0.3));
}

TEST_CASE("obb_corners spans the documented extents") {
  Vehicle v;
  v.center = Vec3(0, 0, 0.75);
  v.length = 4.0;
  v.width = 2.0;
  v.height = 1.5;

  auto extents = [](const std::array<Vec3, 8>& corners, int axis) {
    double lo = corners[0][axis], hi = corners[0][axis];
    for (const Vec3& c : corners) {
      lo = std::min(lo, c[axis]);
      hi = std::max(hi, c[axis]);
    }
    return std::pair{lo, hi};
  };

  SUBCASE("axis aligned") {
    const auto corners = obb_corners(v);
    CHECK(extents(corners, 0) == std::pair{-2.0, 2.0});
    CHECK(extents(corners, 1) == std::pair{-1.0, 1.0});
    CHECK(extents(corners, 2) == std::pair{0.0, 1.5});
  }
  SUBCASE("quarter turn swaps x and y") {
    v.heading_rad = kPi / 2;
    const auto corners = obb_corners(v);
    const auto [xlo, xhi] = extents(corners, 0);
    const auto [ylo, yhi] = extents(corners, 1);
    CHECK(xlo == doctest::Approx(-1.0));
    CHECK(xhi == doctest::Approx(1.0));
    CHECK(ylo == doctest::Approx(-2.0));
    CHECK(yhi == doctest::Approx(2.0));
  }
  SUBCASE("45 degrees widens x to (l cos + w sin)/2") {
    v.heading_rad = kPi / 4;
    const auto [xlo, xhi] = extents(obb_corners(v), 0);
    CHECK(xhi == doctest::Approx(3.0 * std::sqrt(2.0) / 2.0).epsilon(1e-9));
    CHECK(xlo == doctest::Approx(-3.0 * std::sqrt(2.0) / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("obb_corners centroid and corner radius invariants") {
  SeededRng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vehicle v = testing::random_vehicle(rng, i);
    const auto corners = obb_corners(v);
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& c : corners) centroid += c / 8.0;
    CHECK((centroid - v.center).norm() < 1e-12);
    const double radius =
        Vec3(v.length / 2, v.width / 2, v.height / 2).norm();
    for (const Vec3& c : corners)
      CHECK(std::abs((c - v.center).norm() - radius) < 1e-12);
  }
}

TEST_CASE("canonical csv parses one row exactly") {
  TempDir tmp;
  const std::string path = tmp.file(
      "one.csv",
      "frame_id,vehicle_id,x_m,y_m,heading_deg,length_m,width_m,height_m\n"
      "0,7,10.0,3.5,90,4.5,1.8,1.5\n");
  const Scenario s = load_scenario(path, "canonical-csv");
  REQUIRE(s.frames.size() == 1);
  REQUIRE(s.frames[0].vehicles.size() == 1);
  const Vehicle& v = s.frames[0].vehicles[0];
  CHECK(s.frames[0].frame_id == 0);
  CHECK(v.id == 7);
  CHECK(v.center.x() == 10.0);
  CHECK(v.center.y() == 3.5);
  CHECK(v.center.z() == doctest::Approx(0.75));
  CHECK(v.heading_rad == doctest::Approx(kPi / 2));
  CHECK(v.length == 4.5);
  CHECK(v.width == 1.8);
  CHECK(v.height == 1.5);
}

TEST_CASE("canonical csv error paths") {
  TempDir tmp;
  const char* header =
      "frame_id,vehicle_id,x_m,y_m,heading_deg,length_m,width_m,height_m\n";

  CHECK_THROWS_AS(load_canonical_csv(tmp.file("empty.csv", header)),
                  EmptyScenario);
  CHECK_THROWS_AS(load_canonical_csv(tmp.file("hdr.csv", "frame,id\n1,2\n")),
                  MissingColumn);
  CHECK_THROWS_AS(
      load_canonical_csv(tmp.file(
          "short.csv", std::string(header) + "0,1,2.0,3.0\n")),
      MissingColumn);
  CHECK_THROWS_AS(load_canonical_csv(tmp.file(
                      "nan.csv", std::string(header) + "0,1,a,0,0,4,2,1\n")),
                  BadValue);
  CHECK_THROWS_AS(
      load_canonical_csv(tmp.file(
          "negdim.csv", std::string(header) + "0,1,0,0,0,-4,2,1\n")),
      BadValue);
  CHECK_THROWS_AS(
      load_canonical_csv(tmp.file(
          "dup.csv",
          std::string(header) + "0,1,0,0,0,4,2,1\n0,1,9,9,0,4,2,1\n")),
      BadValue);
  CHECK_THROWS_AS(load_canonical_csv((tmp.path / "absent.csv").string()),
                  ScenarioError);

  try {
    load_canonical_csv(
        tmp.file("badcell.csv", std::string(header) + "0,1,0,0,0,4,x,1\n"));
    FAIL("expected BadValue");
  } catch (const BadValue& e) {
    CHECK(e.row == 2);
    CHECK(e.col == 6);
  }
}

TEST_CASE("frames and vehicles come back sorted") {
  TempDir tmp;
  const std::string path = tmp.file(
      "shuffled.csv",
      "frame_id,vehicle_id,x_m,y_m,heading_deg,length_m,width_m,height_m\n"
      "5,2,0,0,0,4,2,1\n"
      "1,9,0,0,0,4,2,1\n"
      "5,1,1,1,0,4,2,1\n"
      "1,3,2,2,0,4,2,1\n");
  const Scenario s = load_scenario(path, "canonical-csv");
  REQUIRE(s.frames.size() == 2);
  CHECK(s.frames[0].frame_id == 1);
  CHECK(s.frames[1].frame_id == 5);
  CHECK(s.frames[0].vehicles[0].id == 3);
  CHECK(s.frames[0].vehicles[1].id == 9);
  CHECK(s.frames[1].vehicles[0].id == 1);
  CHECK(s.frames[1].vehicles[1].id == 2);
}

TEST_CASE("save and reload round trips every field") {
  TempDir tmp;
  SeededRng rng(17);
  Scenario original;
  original.source = "generated";
  for (long f = 0; f < 4; ++f) {
    ScenarioFrame frame;
    frame.frame_id = f * 10;
    for (int i = 0; i < 5; ++i)
      frame.vehicles.push_back(testing::random_vehicle(rng, i, 400.0));
    original.frames.push_back(frame);
  }

  const std::string path = (tmp.path / "roundtrip.csv").string();
  save_scenario_csv(original, path);
  const Scenario loaded = load_scenario(path, "canonical-csv");

  REQUIRE(loaded.frames.size() == original.frames.size());
  for (size_t f = 0; f < original.frames.size(); ++f) {
    CHECK(loaded.frames[f].frame_id == original.frames[f].frame_id);
    REQUIRE(loaded.frames[f].vehicles.size() ==
            original.frames[f].vehicles.size());
    for (size_t i = 0; i < original.frames[f].vehicles.size(); ++i) {
      const Vehicle& a = original.frames[f].vehicles[i];
      const Vehicle& b = loaded.frames[f].vehicles[i];
      CHECK(a.id == b.id);
      CHECK((a.center - b.center).norm() < 1e-9);
      CHECK(std::abs(a.length - b.length) < 1e-9);
      CHECK(std::abs(a.width - b.width) < 1e-9);
      CHECK(std::abs(a.height - b.height) < 1e-9);
      CHECK(std::abs(a.heading_rad - b.heading_rad) < 1e-9);
    }
  }
}

TEST_CASE("ngsim adapter converts feet and fills heights by class") {
  TempDir tmp;
  const std::string path = tmp.file(
      "traj.txt",
      "Vehicle_ID Frame_ID Total_Frames Global_Time Local_X Local_Y Global_X "
      "Global_Y v_length v_Width v_Class v_Vel v_Acc Lane_ID\n"
      "2 13 437 1118846980200 16.467 35.381 6451137.641 1873344.962 14.76 "
      "4.9 2 40.0 0.0 2\n"
      "4 13 437 1118846980200 22.0 120.5 0 0 45.5 8.2 3 38.0 0.0 3\n"
      "9 12 437 1118846980200 10.0 50.0 0 0 8.1 2.6 1 30.0 0.0 1\n");
  const Scenario s = load_scenario(path, "ngsim");
  REQUIRE(s.frames.size() == 2);
  CHECK(s.frames[0].frame_id == 12);
  CHECK(s.frames[1].frame_id == 13);

  const Vehicle& bike = s.frames[0].vehicles[0];
  CHECK(bike.id == 9);
  CHECK(bike.height == doctest::Approx(1.4));

  const Vehicle& car = s.frames[1].vehicles[0];
  CHECK(car.id == 2);
  CHECK(car.length == doctest::Approx(14.76 * 0.3048).epsilon(1e-12));
  CHECK(car.length == doctest::Approx(4.4999).epsilon(1e-3));
  CHECK(car.width == doctest::Approx(4.9 * 0.3048).epsilon(1e-12));
  CHECK(car.center.x() == doctest::Approx(16.467 * 0.3048).epsilon(1e-12));
  CHECK(car.center.y() == doctest::Approx(35.381 * 0.3048).epsilon(1e-12));
  CHECK(car.height == doctest::Approx(1.5));
  CHECK(car.heading_rad == doctest::Approx(kPi / 2));

  const Vehicle& truck = s.frames[1].vehicles[1];
  CHECK(truck.id == 4);
  CHECK(truck.height == doctest::Approx(3.4));
}

TEST_CASE("ngsim rejects short and malformed rows") {
  TempDir tmp;
  CHECK_THROWS_AS(
      load_ngsim(tmp.file("short.txt", "1 2 3 4 5 6 7\n")), MissingColumn);
  CHECK_THROWS_AS(
      load_ngsim(tmp.file("neg.txt",
                          "1 13 0 0 16.0 35.0 0 0 -14.76 4.9 2 0 0 2\n")),
      BadValue);
  CHECK_THROWS_AS(load_ngsim(tmp.file("hdr_only.txt", "Vehicle_ID Frame_ID\n")),
                  EmptyScenario);
}
