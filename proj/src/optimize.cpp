#include "lidopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lidopt/raycast.hpp"
#include "lidopt/rng.hpp"

namespace lidopt {

const char* dim_name(SearchDim dim) {
  switch (dim) {
    case SearchDim::X: return "x_m";
    case SearchDim::Y: return "y_m";
    case SearchDim::Height: return "height_m";
    case SearchDim::TiltX: return "tilt_x_deg";
    case SearchDim::TiltY: return "tilt_y_deg";
  }
  return "?";
}

SearchDim dim_from_name(const std::string& name) {
  if (name == "x_m") return SearchDim::X;
  if (name == "y_m") return SearchDim::Y;
  if (name == "height_m") return SearchDim::Height;
  if (name == "tilt_x_deg") return SearchDim::TiltX;
  if (name == "tilt_y_deg") return SearchDim::TiltY;
  throw InvalidSwarm("unknown search dimension '" + name + "'");
}

void SearchSpace::validate() const {
  if (dims.empty()) throw InvalidSwarm("search space has no dimensions");
  if (lower.size() != size() || upper.size() != size())
    throw InvalidSwarm("search space bounds do not match its dimensions");
  for (Index j = 0; j < size(); ++j) {
    if (!(lower[j] < upper[j]))
      throw InvalidSwarm(std::string("bad bounds for ") + dim_name(dims[j]));
    for (Index i = 0; i < j; ++i)
      if (dims[i] == dims[j])
        throw InvalidSwarm(std::string("duplicate dimension ") + dim_name(dims[j]));
  }
}

DeploymentScore score_deployment(const Deployment& deployment,
                                 const Scenario& scenario,
                                 const LidarModel& model,
                                 const ObjectiveParams& params) {
  const int stride = std::max(1, params.frame_stride);
  const RaySet rays = deploy_rays(model, deployment);
  FrameCaster caster(rays, model);
  CastOptions options;
  options.include_ground_points = false;

  DeploymentScore score;
  for (size_t f = 0; f < scenario.frames.size(); f += stride) {
    const ScenarioFrame& frame = scenario.frames[f];
    const LabeledPointCloud cloud = caster.cast(frame, options);
    for (const VgopReport& rep : evaluate_frame(cloud, frame, params.grid)) {
      const double mean_p = (rep.p_top + rep.p_side + rep.p_front) / 3.0;
      ++score.total;
      if (mean_p >= params.delta) {
        ++score.detected;
        score.fitness += rep.entropy_bits;
      } else {
        score.fitness -= std::abs(params.loss);
      }
    }
  }
  score.proxy_recall =
      score.total > 0 ? static_cast<double>(score.detected) / score.total : 0.0;
  return score;
}

double fitness(const Deployment& deployment, const Scenario& scenario,
               const LidarModel& model, const ObjectiveParams& params) {
  return score_deployment(deployment, scenario, model, params).fitness;
}

VecX pso_velocity(const VecX& velocity, const VecX& position,
                  const VecX& personal_best, const VecX& global_best,
                  double w1, double a1, double a2, double r1, double r2) {
  return w1 * velocity + a1 * r1 * (personal_best - position) +
         a2 * r2 * (global_best - position);
}

VecX clamp(const VecX& position, const SearchSpace& space) {
  return position.cwiseMax(space.lower).cwiseMin(space.upper);
}

namespace {

void validate_swarm(const SearchSpace& space, const SwarmParams& swarm) {
  space.validate();
  if (swarm.iterations < 1) throw InvalidSwarm("iterations must be >= 1");
  if (swarm.particles < 1) throw InvalidSwarm("swarm must have particles");
  if (!(swarm.de_probability >= 0.0 && swarm.de_probability <= 1.0))
    throw InvalidSwarm("de_probability must lie in [0, 1]");
  if (swarm.inertia < 0.0 || swarm.differential_weight < 0.0 ||
      swarm.accel_personal < 0.0 || swarm.accel_global < 0.0)
    throw InvalidSwarm("swarm weights must be non-negative");
  if (swarm.particles < 4 && swarm.de_probability > 0.0)
    throw InvalidSwarm("differential mutation needs at least 4 particles");
}

/// Uniform index in [0, n) excluding the listed values (sorted, distinct).
int draw_excluding(SeededRng& rng, int n, int skip_a, int skip_b = -1) {
  int options = n - (skip_b >= 0 ? 2 : 1);
  int k = rng.below(options);
  int lo = skip_a, hi = skip_b;
  if (hi >= 0 && hi < lo) std::swap(lo, hi);
  if (k >= lo) ++k;
  if (hi >= 0 && k >= hi) ++k;
  return k;
}

}  // namespace

OptimizeResult run_optimizer(const SearchSpace& space, const SwarmParams& swarm,
                             const std::function<double(const VecX&)>& objective) {
  validate_swarm(space, swarm);
  const Index dims = space.size();
  const int n = swarm.particles;
  SeededRng rng(swarm.seed);

  std::vector<VecX> position(n), velocity(n), personal_best_pos(n);
  VecX personal_best(n);
  for (int i = 0; i < n; ++i) {
    position[i] = VecX(dims);
    for (Index j = 0; j < dims; ++j)
      position[i][j] = rng.uniform(space.lower[j], space.upper[j]);
    velocity[i] = VecX::Zero(dims);
  }

  VecX global_best_pos;
  double global_best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    personal_best[i] = objective(position[i]);
    personal_best_pos[i] = position[i];
    if (personal_best[i] > global_best) {
      global_best = personal_best[i];
      global_best_pos = position[i];
    }
  }

  OptimizeResult result;
  result.history.reserve(static_cast<size_t>(swarm.iterations) * n);
  VecX fitness_now(n);

  for (int t = 1; t <= swarm.iterations; ++t) {
    // Draws happen on one stream in particle order; bests stay frozen until
    // the whole swarm has moved and been evaluated.
    for (int i = 0; i < n; ++i) {
      const double r1 = rng.u01();
      const double r2 = rng.u01();
      velocity[i] = pso_velocity(velocity[i], position[i], personal_best_pos[i],
                                 global_best_pos, swarm.inertia,
                                 swarm.accel_personal, swarm.accel_global, r1, r2);
      const double r3 = rng.u01();
      if (r3 < swarm.de_probability) {
        const int j = draw_excluding(rng, n, i);
        const int k = draw_excluding(rng, n, i, j);
        velocity[i] = de_mutation(position[j], position[k],
                                  swarm.differential_weight);
      }
      position[i] = clamp(position_update(position[i], velocity[i]), space);
    }

    for (int i = 0; i < n; ++i) fitness_now[i] = objective(position[i]);

    for (int i = 0; i < n; ++i) {
      if (fitness_now[i] > personal_best[i]) {
        personal_best[i] = fitness_now[i];
        personal_best_pos[i] = position[i];
      }
      if (fitness_now[i] > global_best) {
        global_best = fitness_now[i];
        global_best_pos = position[i];
      }
    }

    for (int i = 0; i < n; ++i) {
      FitnessRecord rec;
      rec.iteration = t;
      rec.particle = i;
      rec.position = position[i];
      rec.velocity = velocity[i];
      rec.fitness = fitness_now[i];
      rec.personal_best = personal_best[i];
      rec.global_best = global_best;
      result.history.push_back(std::move(rec));
    }
  }

  result.best_position = global_best_pos;
  result.best_fitness = global_best;
  return result;
}

Deployment deployment_from_position(const VecX& position,
                                    const SearchSpace& space) {
  Deployment d;
  d.position = Vec3(0.0, 0.0, 2.0);
  d.tilt_x_deg = 0.0;
  d.tilt_y_deg = 0.0;
  for (Index j = 0; j < space.size(); ++j) {
    switch (space.dims[j]) {
      case SearchDim::X: d.position.x() = position[j]; break;
      case SearchDim::Y: d.position.y() = position[j]; break;
      case SearchDim::Height: d.position.z() = position[j]; break;
      case SearchDim::TiltX: d.tilt_x_deg = position[j]; break;
      case SearchDim::TiltY: d.tilt_y_deg = position[j]; break;
    }
  }
  return d;
}

DeploymentSearchResult optimize_deployment(const Scenario& scenario,
                                           const LidarModel& model,
                                           const SearchSpace& space,
                                           const SwarmParams& swarm,
                                           const ObjectiveParams& objective) {
  const auto evaluate = [&](const VecX& p) {
    return fitness(deployment_from_position(p, space), scenario, model,
                   objective);
  };
  DeploymentSearchResult out;
  out.raw = run_optimizer(space, swarm, evaluate);
  out.best = deployment_from_position(out.raw.best_position, space);
  out.best_score = score_deployment(out.best, scenario, model, objective);
  return out;
}

}  // namespace lidopt
