#include "lidopt/scene_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "lidopt/types.hpp"

namespace lidopt {
namespace {

constexpr const char* kCanonicalHeader =
    "frame_id,vehicle_id,x_m,y_m,heading_deg,length_m,width_m,height_m";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// NGSIM exports appear both comma- and whitespace-delimited.
std::vector<std::string> split_loose(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cell.empty()) out.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (!cell.empty()) out.push_back(std::move(cell));
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& cell, long row, int col) {
  const std::string t = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw BadValue(row, col, "expected a number, got '" + cell + "'");
  return value;
}

long parse_long(const std::string& cell, long row, int col) {
  const std::string t = trim(cell);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw BadValue(row, col, "expected an integer, got '" + cell + "'");
  return value;
}

bool looks_numeric(const std::string& cell) {
  const std::string t = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  return ec == std::errc{} && ptr == t.data() + t.size();
}

void require_positive(double value, long row, int col, const char* what) {
  if (!(value > 0.0))
    throw BadValue(row, col, std::string(what) + " must be positive");
}

Scenario assemble(std::map<long, std::vector<Vehicle>>& by_frame,
                  const std::string& source) {
  Scenario scenario;
  scenario.source = source;
  scenario.frames.reserve(by_frame.size());
  for (auto& [frame_id, vehicles] : by_frame) {
    std::sort(vehicles.begin(), vehicles.end(),
              [](const Vehicle& a, const Vehicle& b) { return a.id < b.id; });
    for (size_t i = 1; i < vehicles.size(); ++i) {
      if (vehicles[i].id == vehicles[i - 1].id)
        throw BadValue(frame_id, 1,
                       "duplicate vehicle id " + std::to_string(vehicles[i].id) +
                           " in frame " + std::to_string(frame_id));
    }
    scenario.frames.push_back({frame_id, std::move(vehicles)});
  }
  if (scenario.frames.empty())
    throw EmptyScenario("no vehicle rows in " + source);
  return scenario;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path);
  return in;
}

}  // namespace

Scenario load_canonical_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line))
    throw EmptyScenario("empty file " + path);
  if (trim(line) != kCanonicalHeader)
    throw MissingColumn("expected header '" + std::string(kCanonicalHeader) +
                        "' in " + path);

  std::map<long, std::vector<Vehicle>> by_frame;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() < 8)
      throw MissingColumn("row " + std::to_string(row) + " has " +
                          std::to_string(cells.size()) + " of 8 columns");
    Vehicle v;
    const long frame_id = parse_long(cells[0], row, 0);
    v.id = static_cast<int>(parse_long(cells[1], row, 1));
    const double x = parse_double(cells[2], row, 2);
    const double y = parse_double(cells[3], row, 3);
    const double heading_deg = parse_double(cells[4], row, 4);
    v.length = parse_double(cells[5], row, 5);
    v.width = parse_double(cells[6], row, 6);
    v.height = parse_double(cells[7], row, 7);
    require_positive(v.length, row, 5, "length");
    require_positive(v.width, row, 6, "width");
    require_positive(v.height, row, 7, "height");
    v.heading_rad = normalize_heading(deg2rad(heading_deg));
    v.center = Vec3(x, y, v.height / 2.0);
    by_frame[frame_id].push_back(v);
  }
  return assemble(by_frame, path);
}

Scenario load_ngsim(const std::string& path) {
  // Column indices of the NGSIM trajectory export (0-based):
  // 0 Vehicle_ID, 1 Frame_ID, 4 Local_X, 5 Local_Y, 8 v_length,
  // 9 v_Width, 10 v_Class. Values are in feet; traffic runs along +Y.
  constexpr double kFootToMeter = 0.3048;
  constexpr int kColVehicle = 0, kColFrame = 1, kColX = 4, kColY = 5;
  constexpr int kColLength = 8, kColWidth = 9, kColClass = 10;

  std::ifstream in = open_or_throw(path);
  std::map<long, std::vector<Vehicle>> by_frame;
  std::string line;
  long row = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++row;
    const auto cells = split_loose(line);
    if (cells.empty()) continue;
    if (first_content) {
      first_content = false;
      if (!looks_numeric(cells[0])) continue;  // header row
    }
    if (static_cast<int>(cells.size()) <= kColClass)
      throw MissingColumn("row " + std::to_string(row) + " has " +
                          std::to_string(cells.size()) + " of " +
                          std::to_string(kColClass + 1) + " columns");
    Vehicle v;
    v.id = static_cast<int>(parse_long(cells[kColVehicle], row, kColVehicle));
    const long frame_id = parse_long(cells[kColFrame], row, kColFrame);
    const double x = parse_double(cells[kColX], row, kColX) * kFootToMeter;
    const double y = parse_double(cells[kColY], row, kColY) * kFootToMeter;
    v.length = parse_double(cells[kColLength], row, kColLength) * kFootToMeter;
    v.width = parse_double(cells[kColWidth], row, kColWidth) * kFootToMeter;
    require_positive(v.length, row, kColLength, "length");
    require_positive(v.width, row, kColWidth, "width");
    const long klass = parse_long(cells[kColClass], row, kColClass);
    switch (klass) {
      case 1: v.height = 1.4; break;   // motorcycle
      case 2: v.height = 1.5; break;   // auto
      case 3: v.height = 3.4; break;   // truck/bus
      default: v.height = kDefaultVehicleHeight; break;
    }
    v.heading_rad = normalize_heading(std::numbers::pi / 2.0);
    v.center = Vec3(x, y, v.height / 2.0);
    by_frame[frame_id].push_back(v);
  }
  return assemble(by_frame, path);
}

Scenario load_scenario(const std::string& path, const std::string& format) {
  if (format == "canonical-csv") return load_canonical_csv(path);
  if (format == "ngsim") return load_ngsim(path);
  throw ScenarioError("unknown scenario format '" + format + "'");
}

void save_scenario_csv(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write " + path);
  out << kCanonicalHeader << "\n";
  char buf[256];
  for (const auto& frame : scenario.frames) {
    for (const auto& v : frame.vehicles) {
      std::snprintf(buf, sizeof(buf),
                    "%ld,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    frame.frame_id, v.id, v.center.x(), v.center.y(),
                    rad2deg(v.heading_rad), v.length, v.width, v.height);
      out << buf;
    }
  }
  if (!out) throw ScenarioError("failed writing " + path);
}

}  // namespace lidopt
