#pragma once

#include <stdexcept>
#include <vector>

#include "lidopt/raycast.hpp"
#include "lidopt/scene.hpp"
#include "lidopt/types.hpp"

namespace lidopt {

/// Cell areas of the three orthographic view grids, in square meters.
/// Cells are square with edge sqrt(mu).
struct GridSpec {
  double mu_top_m2 = 0.0025;
  double mu_side_m2 = 0.0025;
  double mu_front_m2 = 0.0025;
};

struct VgopReport {
  int vehicle_id = 0;
  long n_top = 0, n_side = 0, n_front = 0;
  long occupied_top = 0, occupied_side = 0, occupied_front = 0;
  double p_top = 0.0, p_side = 0.0, p_front = 0.0;
  double entropy_bits = 0.0;
  long point_count = 0;
};

struct FrameMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Upper bound of pe_vgop, attained at p = 1/e in all three views.
double max_entropy_bits();

/// World points into the vehicle frame: origin at the box center, X along
/// the vehicle's forward direction.
Mat3X to_vehicle_frame(const Mat3X& points, const Vehicle& vehicle);

/// Occupied-cell sets of the three view grids. Cell ids are row-major per
/// view; each list is sorted and duplicate-free. Points beyond the box
/// extent by more than 1e-6 on any axis are dropped; boundary points clamp
/// into the outermost cell.
struct ViewCells {
  std::vector<long> top, side, front;
};
ViewCells project_and_grid(const Mat3X& points_veh, const Vehicle& vehicle,
                           const GridSpec& grid);

/// Cell totals per view: N = ceil(area / mu), guarded against float noise
/// in the product.
long grid_cell_count(double extent_a, double extent_b, double mu);

struct ViewProbabilities {
  double p_top = 0.0, p_side = 0.0, p_front = 0.0;
};
ViewProbabilities vgop(const ViewCells& occupied, const Vehicle& vehicle,
                       const GridSpec& grid);

/// E = -sum p_j log2 p_j over the three views, with 0 log 0 = 0.
double pe_vgop(double p_top, double p_side, double p_front);

/// One report per vehicle in the frame, zero-point vehicles included.
/// Throws FrameMismatch when cloud and frame ids differ.
std::vector<VgopReport> evaluate_frame(const LabeledPointCloud& cloud,
                                       const ScenarioFrame& frame,
                                       const GridSpec& grid = {});

struct BaselineReport {
  int vehicle_id = 0;
  long point_count = 0;
  long occupied_voxels = 0;
  long total_voxels = 0;
  double voxel_entropy = 0.0;
};

/// Simple 3D-voxel comparison metric over the same clouds.
std::vector<BaselineReport> baseline_metrics(const LabeledPointCloud& cloud,
                                             const ScenarioFrame& frame,
                                             double voxel_edge_m = 0.1);

}  // namespace lidopt
