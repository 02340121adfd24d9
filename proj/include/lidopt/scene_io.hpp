#pragma once

#include <stdexcept>
#include <string>

#include "lidopt/scene.hpp"

namespace lidopt {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A required column is absent from the input header or row.
struct MissingColumn : ScenarioError {
  explicit MissingColumn(const std::string& what) : ScenarioError(what) {}
};

/// A cell failed to parse or violates a basic sanity bound.
struct BadValue : ScenarioError {
  BadValue(long row, int col, const std::string& what)
      : ScenarioError("row " + std::to_string(row) + " col " +
                      std::to_string(col) + ": " + what),
        row(row),
        col(col) {}
  long row;
  int col;
};

/// The file parsed but produced no frames.
struct EmptyScenario : ScenarioError {
  explicit EmptyScenario(const std::string& what) : ScenarioError(what) {}
};

/// Supported trajectory formats. "canonical-csv" is the native layout,
/// "ngsim" adapts the NGSIM trajectory export (feet, no heading column).
Scenario load_scenario(const std::string& path, const std::string& format);

Scenario load_canonical_csv(const std::string& path);
Scenario load_ngsim(const std::string& path);

/// Writes the canonical layout; a loader round-trips it exactly apart from
/// float formatting.
void save_scenario_csv(const Scenario& scenario, const std::string& path);

}  // namespace lidopt
