#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "lidopt/geometry.hpp"
#include "lidopt/optimize.hpp"

namespace lidopt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One run's complete inputs. simulate/evaluate need `deployment`,
/// optimize needs `search_space`; a config carries exactly one of the two.
struct RunConfig {
  std::string preset_path;
  std::string scenario_path;
  std::string scenario_format = "canonical-csv";
  std::optional<Deployment> deployment;
  std::optional<SearchSpace> search_space;
  SwarmParams swarm;
  ObjectiveParams objective;
  double baseline_voxel_edge_m = 0.1;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  /// Deterministic serialization of everything that affects results; the
  /// output directory is deliberately left out so the same experiment hashes
  /// the same wherever it lands.
  std::string canonical_json() const;
  std::uint64_t config_hash() const;
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> preset;
  std::optional<int> frame_stride;
};

/// Parses a JSON run config. Unknown keys and out-of-range values raise
/// ConfigError with the offending key in the message.
RunConfig load_run_config(const std::string& path);

/// Command-line flags win over file values.
void apply_overrides(RunConfig& config, const CliOverrides& overrides);

}  // namespace lidopt
