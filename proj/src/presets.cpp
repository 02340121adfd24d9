#include "lidopt/presets.hpp"

#include <fstream>

#include <json.hpp>

namespace lidopt {
namespace {

std::vector<double> uniform_angles(double lo, double hi, double step) {
  std::vector<double> angles;
  const int n = static_cast<int>(std::lround((hi - lo) / step)) + 1;
  angles.reserve(n);
  for (int i = 0; i < n; ++i) angles.push_back(lo + step * i);
  return angles;
}

}  // namespace

LidarModel load_preset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PresetError("cannot open preset " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PresetError("preset " + path + ": " + e.what());
  }
  LidarModel model;
  try {
    model.name = j.at("name").get<std::string>();
    model.vertical_angles_deg = j.at("vertical_angles").get<std::vector<double>>();
    model.horizontal_resolution_deg = j.at("horizontal_resolution_deg").get<double>();
    model.min_range_m = j.at("min_range_m").get<double>();
    model.max_range_m = j.at("max_range_m").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw PresetError("preset " + path + ": " + e.what());
  }
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw PresetError("preset " + path + ": " + e.what());
  }
  return model;
}

void save_preset(const LidarModel& model, const std::string& path) {
  model.validate();
  nlohmann::ordered_json j;
  j["name"] = model.name;
  j["vertical_angles"] = model.vertical_angles_deg;
  j["horizontal_resolution_deg"] = model.horizontal_resolution_deg;
  j["min_range_m"] = model.min_range_m;
  j["max_range_m"] = model.max_range_m;
  std::ofstream out(path);
  if (!out) throw PresetError("cannot write preset " + path);
  out << j.dump(2) << "\n";
}

LidarModel make_rs16() {
  LidarModel m;
  m.name = "RS-16";
  m.vertical_angles_deg = uniform_angles(-15.0, 15.0, 2.0);
  m.horizontal_resolution_deg = 0.2;
  m.min_range_m = 0.4;
  m.max_range_m = 50.0;
  return m;
}

LidarModel make_rs32() {
  LidarModel m;
  m.name = "RS-32";
  m.vertical_angles_deg = uniform_angles(-16.0, 15.0, 1.0);
  m.horizontal_resolution_deg = 0.2;
  m.min_range_m = 0.4;
  m.max_range_m = 80.0;
  return m;
}

LidarModel make_rs80() {
  // 80 beams over -25..+15 deg: coarse below -5.8, a dense 0.2 deg band
  // around the horizon, widening spacing above +3.
  LidarModel m;
  m.name = "RS-80";
  std::vector<double>& a = m.vertical_angles_deg;
  for (int k = 0; k < 25; ++k) a.push_back(-25.0 + 0.8 * k);   // -25 .. -5.8
  for (int k = 0; k <= 40; ++k) a.push_back(-5.0 + 0.2 * k);   // -5 .. +3
  for (int k = 1; k <= 14; ++k) a.push_back(3.0 + 6.0 * k / 7.0);  // .. +15
  m.horizontal_resolution_deg = 0.2;
  m.min_range_m = 1.0;
  m.max_range_m = 150.0;
  return m;
}

}  // namespace lidopt
