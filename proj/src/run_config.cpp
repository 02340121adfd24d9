#include "lidopt/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "lidopt/exports.hpp"

namespace lidopt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& object, const char* where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return key == k;
        }) == allowed.end())
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& object, const char* key, T fallback) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

template <typename T>
T get_required(const json& object, const char* key, const char* where) {
  if (!object.contains(key))
    throw ConfigError(std::string("missing key '") + key + "' in " + where);
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

SearchSpace parse_search_space(const json& object) {
  SearchSpace space;
  std::vector<std::pair<SearchDim, std::pair<double, double>>> entries;
  for (const auto& [key, value] : object.items()) {
    SearchDim dim;
    try {
      dim = dim_from_name(key);
    } catch (const InvalidSwarm&) {
      throw ConfigError("unknown search dimension '" + key + "'");
    }
    if (!value.is_array() || value.size() != 2)
      throw ConfigError("bounds for '" + key + "' must be [lower, upper]");
    entries.push_back({dim, {value[0].get<double>(), value[1].get<double>()}});
  }
  // Fixed dimension order regardless of file key order, so particle layout
  // and draw order depend only on which dimensions are searched.
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  space.lower.resize(static_cast<Index>(entries.size()));
  space.upper.resize(static_cast<Index>(entries.size()));
  for (size_t j = 0; j < entries.size(); ++j) {
    space.dims.push_back(entries[j].first);
    space.lower[static_cast<Index>(j)] = entries[j].second.first;
    space.upper[static_cast<Index>(j)] = entries[j].second.second;
  }
  try {
    space.validate();
  } catch (const InvalidSwarm& e) {
    throw ConfigError(e.what());
  }
  return space;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path + " is not an object");
  check_keys(j, "config",
             {"preset", "scenario", "deployment", "search_space", "swarm",
              "objective", "baseline_voxel_edge_m", "out_dir", "seed"});

  RunConfig config;
  config.preset_path = get_required<std::string>(j, "preset", "config");

  const json scenario = j.contains("scenario") ? j.at("scenario") : json::object();
  check_keys(scenario, "scenario", {"path", "format"});
  config.scenario_path = get_required<std::string>(scenario, "path", "scenario");
  config.scenario_format = get_or<std::string>(scenario, "format", "canonical-csv");
  if (config.scenario_format != "canonical-csv" &&
      config.scenario_format != "ngsim")
    throw ConfigError("unknown scenario format '" + config.scenario_format + "'");

  if (j.contains("deployment") && j.contains("search_space"))
    throw ConfigError("config carries both deployment and search_space");

  if (j.contains("deployment")) {
    const json d = j.at("deployment");
    check_keys(d, "deployment",
               {"x_m", "y_m", "height_m", "tilt_x_deg", "tilt_y_deg"});
    Deployment dep;
    dep.position = Vec3(get_or<double>(d, "x_m", 0.0),
                        get_or<double>(d, "y_m", 0.0),
                        get_or<double>(d, "height_m", 2.0));
    dep.tilt_x_deg = get_or<double>(d, "tilt_x_deg", 0.0);
    dep.tilt_y_deg = get_or<double>(d, "tilt_y_deg", 0.0);
    config.deployment = dep;
  }
  if (j.contains("search_space"))
    config.search_space = parse_search_space(j.at("search_space"));

  const json swarm = j.contains("swarm") ? j.at("swarm") : json::object();
  check_keys(swarm, "swarm",
             {"iterations", "particles", "inertia", "differential_weight",
              "accel_personal", "accel_global", "de_probability"});
  config.swarm.iterations = get_or<int>(swarm, "iterations", 100);
  config.swarm.particles = get_or<int>(swarm, "particles", 20);
  config.swarm.inertia = get_or<double>(swarm, "inertia", 0.7);
  config.swarm.differential_weight =
      get_or<double>(swarm, "differential_weight", 0.5);
  config.swarm.accel_personal = get_or<double>(swarm, "accel_personal", 0.3);
  config.swarm.accel_global = get_or<double>(swarm, "accel_global", 0.2);
  config.swarm.de_probability = get_or<double>(swarm, "de_probability", 0.1);

  const json objective = j.contains("objective") ? j.at("objective") : json::object();
  check_keys(objective, "objective", {"delta", "loss", "frame_stride", "grid"});
  config.objective.delta = get_or<double>(objective, "delta", 0.005);
  config.objective.loss = get_or<double>(objective, "loss", -1.0);
  config.objective.frame_stride = get_or<int>(objective, "frame_stride", 1);
  if (!(config.objective.delta > 0.0 && config.objective.delta < 1.0))
    throw ConfigError("objective.delta must lie in (0, 1)");
  if (!std::isfinite(config.objective.loss))
    throw ConfigError("objective.loss must be finite");
  if (config.objective.frame_stride < 1)
    throw ConfigError("objective.frame_stride must be >= 1");
  const json grid = objective.contains("grid") ? objective.at("grid") : json::object();
  check_keys(grid, "objective.grid", {"mu_top_m2", "mu_side_m2", "mu_front_m2"});
  config.objective.grid.mu_top_m2 = get_or<double>(grid, "mu_top_m2", 0.0025);
  config.objective.grid.mu_side_m2 = get_or<double>(grid, "mu_side_m2", 0.0025);
  config.objective.grid.mu_front_m2 = get_or<double>(grid, "mu_front_m2", 0.0025);
  if (!(config.objective.grid.mu_top_m2 > 0.0 &&
        config.objective.grid.mu_side_m2 > 0.0 &&
        config.objective.grid.mu_front_m2 > 0.0))
    throw ConfigError("grid cell areas must be positive");

  config.baseline_voxel_edge_m = get_or<double>(j, "baseline_voxel_edge_m", 0.1);
  if (!(config.baseline_voxel_edge_m > 0.0))
    throw ConfigError("baseline_voxel_edge_m must be positive");
  config.out_dir = get_or<std::string>(j, "out_dir", "out");
  config.seed = get_or<std::uint64_t>(j, "seed", 0);
  config.swarm.seed = config.seed;
  return config;
}

void apply_overrides(RunConfig& config, const CliOverrides& overrides) {
  if (overrides.seed) {
    config.seed = *overrides.seed;
    config.swarm.seed = *overrides.seed;
  }
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.preset) config.preset_path = *overrides.preset;
  if (overrides.frame_stride) {
    if (*overrides.frame_stride < 1)
      throw ConfigError("--frames stride must be >= 1");
    config.objective.frame_stride = *overrides.frame_stride;
  }
}

std::string RunConfig::canonical_json() const {
  ordered_json j;
  j["preset"] = preset_path;
  j["scenario"] = {{"path", scenario_path}, {"format", scenario_format}};
  if (deployment) {
    j["deployment"] = {{"x_m", deployment->position.x()},
                       {"y_m", deployment->position.y()},
                       {"height_m", deployment->position.z()},
                       {"tilt_x_deg", deployment->tilt_x_deg},
                       {"tilt_y_deg", deployment->tilt_y_deg}};
  }
  if (search_space) {
    ordered_json bounds;
    for (Index k = 0; k < search_space->size(); ++k)
      bounds[dim_name(search_space->dims[k])] = {search_space->lower[k],
                                                 search_space->upper[k]};
    j["search_space"] = bounds;
  }
  j["swarm"] = {{"iterations", swarm.iterations},
                {"particles", swarm.particles},
                {"inertia", swarm.inertia},
                {"differential_weight", swarm.differential_weight},
                {"accel_personal", swarm.accel_personal},
                {"accel_global", swarm.accel_global},
                {"de_probability", swarm.de_probability}};
  j["objective"] = {{"delta", objective.delta},
                    {"loss", objective.loss},
                    {"frame_stride", objective.frame_stride},
                    {"grid",
                     {{"mu_top_m2", objective.grid.mu_top_m2},
                      {"mu_side_m2", objective.grid.mu_side_m2},
                      {"mu_front_m2", objective.grid.mu_front_m2}}}};
  j["baseline_voxel_edge_m"] = baseline_voxel_edge_m;
  j["seed"] = seed;
  return j.dump();
}

std::uint64_t RunConfig::config_hash() const { return fnv1a64(canonical_json()); }

}  // namespace lidopt
