#include "lidopt/metric.hpp"

#include <algorithm>
#include <cmath>

namespace lidopt {
namespace {

constexpr double kExtentSlack = 1e-6;
// Absorbs float noise in area/mu before the ceil, so exactly divisible
// boxes land on the exact quotient.
constexpr double kCeilGuard = 1e-9;

long ceil_guarded(double x) {
  return static_cast<long>(std::ceil(x - kCeilGuard));
}

long axis_cells(double extent, double edge) {
  return std::max<long>(1, ceil_guarded(extent / edge));
}

/// Flat cell id for one view, or -1 for a discarded outlier. u, v are
/// coordinates from the box min corner along the view's two axes.
long cell_id(double u, double v, double extent_u, double extent_v,
             double edge) {
  if (u < -kExtentSlack || u > extent_u + kExtentSlack) return -1;
  if (v < -kExtentSlack || v > extent_v + kExtentSlack) return -1;
  const long nu = axis_cells(extent_u, edge);
  const long nv = axis_cells(extent_v, edge);
  long iu = static_cast<long>(std::floor(u / edge));
  long iv = static_cast<long>(std::floor(v / edge));
  iu = std::clamp<long>(iu, 0, nu - 1);
  iv = std::clamp<long>(iv, 0, nv - 1);
  return iu * nv + iv;
}

void sort_unique(std::vector<long>& cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

double entropy_term(double p) {
  return p > 0.0 ? -p * std::log2(p) : 0.0;
}

/// Indices of each vehicle's points in the cloud, one list per vehicle in
/// frame order. Tolerates frames whose vehicles are not id-sorted.
std::vector<std::vector<Index>> group_by_vehicle(const LabeledPointCloud& cloud,
                                                 const ScenarioFrame& frame) {
  std::vector<std::pair<int, size_t>> slots(frame.vehicles.size());
  for (size_t k = 0; k < frame.vehicles.size(); ++k)
    slots[k] = {frame.vehicles[k].id, k};
  std::sort(slots.begin(), slots.end());

  std::vector<std::vector<Index>> member(frame.vehicles.size());
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    const int id = cloud.points[i].vehicle_id;
    if (id == kGroundId) continue;
    const auto it = std::lower_bound(
        slots.begin(), slots.end(), id,
        [](const auto& slot, int key) { return slot.first < key; });
    if (it == slots.end() || it->first != id) continue;
    member[it->second].push_back(static_cast<Index>(i));
  }
  return member;
}

Mat3X gather_positions(const LabeledPointCloud& cloud,
                       const std::vector<Index>& indices) {
  Mat3X points(3, static_cast<Index>(indices.size()));
  for (size_t j = 0; j < indices.size(); ++j)
    points.col(static_cast<Index>(j)) = cloud.points[indices[j]].position;
  return points;
}

}  // namespace

double max_entropy_bits() {
  const double inv_e = 1.0 / std::numbers::e;
  return 3.0 * entropy_term(inv_e);
}

Mat3X to_vehicle_frame(const Mat3X& points, const Vehicle& vehicle) {
  const Mat3 rot_t = yaw_rotation(vehicle.heading_rad).transpose();
  return rot_t * (points.colwise() - vehicle.center);
}

long grid_cell_count(double extent_a, double extent_b, double mu) {
  return ceil_guarded(extent_a * extent_b / mu);
}

ViewCells project_and_grid(const Mat3X& points_veh, const Vehicle& vehicle,
                           const GridSpec& grid) {
  const double l = vehicle.length, w = vehicle.width, h = vehicle.height;
  const double e_top = std::sqrt(grid.mu_top_m2);
  const double e_side = std::sqrt(grid.mu_side_m2);
  const double e_front = std::sqrt(grid.mu_front_m2);

  ViewCells cells;
  for (Index i = 0; i < points_veh.cols(); ++i) {
    const double u = points_veh(0, i) + l / 2.0;
    const double v = points_veh(1, i) + w / 2.0;
    const double s = points_veh(2, i) + h / 2.0;
    if (u < -kExtentSlack || u > l + kExtentSlack) continue;
    if (v < -kExtentSlack || v > w + kExtentSlack) continue;
    if (s < -kExtentSlack || s > h + kExtentSlack) continue;
    cells.top.push_back(cell_id(u, v, l, w, e_top));
    cells.side.push_back(cell_id(u, s, l, h, e_side));
    cells.front.push_back(cell_id(v, s, w, h, e_front));
  }
  sort_unique(cells.top);
  sort_unique(cells.side);
  sort_unique(cells.front);
  return cells;
}

ViewProbabilities vgop(const ViewCells& occupied, const Vehicle& vehicle,
                       const GridSpec& grid) {
  const long n_top = grid_cell_count(vehicle.length, vehicle.width, grid.mu_top_m2);
  const long n_side = grid_cell_count(vehicle.length, vehicle.height, grid.mu_side_m2);
  const long n_front = grid_cell_count(vehicle.width, vehicle.height, grid.mu_front_m2);
  ViewProbabilities p;
  p.p_top = std::min(1.0, static_cast<double>(occupied.top.size()) / n_top);
  p.p_side = std::min(1.0, static_cast<double>(occupied.side.size()) / n_side);
  p.p_front = std::min(1.0, static_cast<double>(occupied.front.size()) / n_front);
  return p;
}

double pe_vgop(double p_top, double p_side, double p_front) {
  return entropy_term(p_top) + entropy_term(p_side) + entropy_term(p_front);
}

std::vector<VgopReport> evaluate_frame(const LabeledPointCloud& cloud,
                                       const ScenarioFrame& frame,
                                       const GridSpec& grid) {
  if (cloud.frame_id != frame.frame_id)
    throw FrameMismatch("cloud frame " + std::to_string(cloud.frame_id) +
                        " vs scenario frame " + std::to_string(frame.frame_id));

  const size_t n_vehicles = frame.vehicles.size();
  const auto member = group_by_vehicle(cloud, frame);

  std::vector<VgopReport> reports(n_vehicles);
  for (size_t k = 0; k < n_vehicles; ++k) {
    const Vehicle& vehicle = frame.vehicles[k];
    const Mat3X points = gather_positions(cloud, member[k]);
    const ViewCells cells = project_and_grid(to_vehicle_frame(points, vehicle),
                                             vehicle, grid);
    const ViewProbabilities p = vgop(cells, vehicle, grid);

    VgopReport& rep = reports[k];
    rep.vehicle_id = vehicle.id;
    rep.n_top = grid_cell_count(vehicle.length, vehicle.width, grid.mu_top_m2);
    rep.n_side = grid_cell_count(vehicle.length, vehicle.height, grid.mu_side_m2);
    rep.n_front = grid_cell_count(vehicle.width, vehicle.height, grid.mu_front_m2);
    rep.occupied_top = std::min<long>(cells.top.size(), rep.n_top);
    rep.occupied_side = std::min<long>(cells.side.size(), rep.n_side);
    rep.occupied_front = std::min<long>(cells.front.size(), rep.n_front);
    rep.p_top = p.p_top;
    rep.p_side = p.p_side;
    rep.p_front = p.p_front;
    rep.entropy_bits = pe_vgop(p.p_top, p.p_side, p.p_front);
    rep.point_count = static_cast<long>(member[k].size());
  }
  return reports;
}

std::vector<BaselineReport> baseline_metrics(const LabeledPointCloud& cloud,
                                             const ScenarioFrame& frame,
                                             double voxel_edge_m) {
  const size_t n_vehicles = frame.vehicles.size();
  const auto member = group_by_vehicle(cloud, frame);

  std::vector<BaselineReport> reports(n_vehicles);
  for (size_t k = 0; k < n_vehicles; ++k) {
    const Vehicle& vehicle = frame.vehicles[k];
    const double l = vehicle.length, w = vehicle.width, h = vehicle.height;
    const long nx = axis_cells(l, voxel_edge_m);
    const long ny = axis_cells(w, voxel_edge_m);
    const long nz = axis_cells(h, voxel_edge_m);

    const Mat3X local =
        to_vehicle_frame(gather_positions(cloud, member[k]), vehicle);

    std::vector<long> voxels;
    for (Index i = 0; i < local.cols(); ++i) {
      const double u = local(0, i) + l / 2.0;
      const double v = local(1, i) + w / 2.0;
      const double s = local(2, i) + h / 2.0;
      if (u < -kExtentSlack || u > l + kExtentSlack) continue;
      if (v < -kExtentSlack || v > w + kExtentSlack) continue;
      if (s < -kExtentSlack || s > h + kExtentSlack) continue;
      const long ix = std::clamp<long>(
          static_cast<long>(std::floor(u / voxel_edge_m)), 0, nx - 1);
      const long iy = std::clamp<long>(
          static_cast<long>(std::floor(v / voxel_edge_m)), 0, ny - 1);
      const long iz = std::clamp<long>(
          static_cast<long>(std::floor(s / voxel_edge_m)), 0, nz - 1);
      voxels.push_back((ix * ny + iy) * nz + iz);
    }
    sort_unique(voxels);

    BaselineReport& rep = reports[k];
    rep.vehicle_id = vehicle.id;
    rep.point_count = static_cast<long>(member[k].size());
    rep.total_voxels = nx * ny * nz;
    rep.occupied_voxels = std::min<long>(voxels.size(), rep.total_voxels);
    const double q =
        std::min(1.0, static_cast<double>(rep.occupied_voxels) / rep.total_voxels);
    rep.voxel_entropy = entropy_term(q);
  }
  return reports;
}

}  // namespace lidopt
