#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lidopt/geometry.hpp"
#include "lidopt/metric.hpp"
#include "lidopt/scene.hpp"
#include "lidopt/types.hpp"

namespace lidopt {

/// Deployment coordinates the search may touch.
enum class SearchDim { X, Y, Height, TiltX, TiltY };

const char* dim_name(SearchDim dim);
SearchDim dim_from_name(const std::string& name);

struct SearchSpace {
  std::vector<SearchDim> dims;
  VecX lower;
  VecX upper;

  Index size() const { return static_cast<Index>(dims.size()); }
  void validate() const;
};

struct SwarmParams {
  int iterations = 100;
  int particles = 20;
  double inertia = 0.7;              // w1
  double differential_weight = 0.5;  // w2
  double accel_personal = 0.3;       // a1
  double accel_global = 0.2;         // a2
  double de_probability = 0.1;       // gamma
  std::uint64_t seed = 0;
};

struct ObjectiveParams {
  double delta = 0.005;
  double loss = -1.0;  // per undetected vehicle; applied as -|loss|
  GridSpec grid;
  int frame_stride = 1;  // evaluate every k-th frame
};

struct FitnessRecord {
  int iteration = 0;  // 1-based
  int particle = 0;
  VecX position;
  VecX velocity;
  double fitness = 0.0;
  double personal_best = 0.0;
  double global_best = 0.0;
};

struct InvalidSwarm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Objective pieces shared by the optimizer and the report commands.
struct DeploymentScore {
  double fitness = 0.0;
  double proxy_recall = 0.0;  // detected / total over evaluated frames
  long detected = 0;
  long total = 0;
};

/// Sums per-vehicle contributions over every frame_stride-th frame: entropy
/// when the mean view occupancy clears delta, otherwise -|loss|.
DeploymentScore score_deployment(const Deployment& deployment,
                                 const Scenario& scenario,
                                 const LidarModel& model,
                                 const ObjectiveParams& params);

double fitness(const Deployment& deployment, const Scenario& scenario,
               const LidarModel& model, const ObjectiveParams& params);

/// v' = w1 v + a1 r1 (pbest - p) + a2 r2 (gbest - p)
VecX pso_velocity(const VecX& velocity, const VecX& position,
                  const VecX& personal_best, const VecX& global_best,
                  double w1, double a1, double a2, double r1, double r2);

inline VecX position_update(const VecX& position, const VecX& velocity) {
  return position + velocity;
}

/// Velocity that lands the particle on the mutant p_i + w2 (p_j - p_k).
inline VecX de_mutation(const VecX& position_j, const VecX& position_k,
                        double w2) {
  return w2 * (position_j - position_k);
}

VecX clamp(const VecX& position, const SearchSpace& space);

struct OptimizeResult {
  VecX best_position;
  double best_fitness = 0.0;
  std::vector<FitnessRecord> history;  // one record per (iteration, particle)
};

/// DE-PSO over an arbitrary objective. Positions start uniform in bounds,
/// velocities at zero; the initial swarm is evaluated once to seed the bests
/// and does not appear in the history. Each iteration draws per particle, in
/// particle order: r1, r2, r3, then mutation partners j and k when r3 falls
/// under de_probability. Bests update on strictly greater fitness only,
/// after the whole swarm has been evaluated.
OptimizeResult run_optimizer(const SearchSpace& space, const SwarmParams& swarm,
                             const std::function<double(const VecX&)>& objective);

/// Expands a position vector into a Deployment; coordinates the space does
/// not cover stay at the baseline (x = y = 0, height 2.0, zero tilt).
Deployment deployment_from_position(const VecX& position,
                                    const SearchSpace& space);

struct DeploymentSearchResult {
  Deployment best;
  DeploymentScore best_score;
  OptimizeResult raw;
};

DeploymentSearchResult optimize_deployment(const Scenario& scenario,
                                           const LidarModel& model,
                                           const SearchSpace& space,
                                           const SwarmParams& swarm,
                                           const ObjectiveParams& objective);

}  // namespace lidopt
