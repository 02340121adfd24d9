#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lidopt/metric.hpp"
#include "lidopt/optimize.hpp"
#include "lidopt/raycast.hpp"

namespace lidopt {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view data);

/// First line of every export: provenance of the run that wrote it.
std::string config_comment(std::uint64_t config_hash, std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);

void write_point_cloud(const std::string& path, const std::string& comment,
                       const LabeledPointCloud& cloud);

/// Rows across frames plus a trailing summary comment with mean/min entropy
/// and the share of vehicles whose mean view occupancy clears delta.
void write_vgop_reports(
    const std::string& path, const std::string& comment,
    const std::vector<std::pair<long, VgopReport>>& rows, double delta);

void write_baseline_reports(
    const std::string& path, const std::string& comment,
    const std::vector<std::pair<long, BaselineReport>>& rows);

void write_history(const std::string& path, const std::string& comment,
                   const SearchSpace& space,
                   const std::vector<FitnessRecord>& history);

}  // namespace lidopt
