#include "lidopt/exports.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace lidopt {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

std::string fmt(const char* spec, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, value);
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string config_comment(std::uint64_t config_hash, std::uint64_t seed) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "# config_hash=0x%016llx seed=%llu",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  finish(out, path);
}

void write_point_cloud(const std::string& path, const std::string& comment,
                       const LabeledPointCloud& cloud) {
  std::ofstream out = open_out(path);
  out << comment << "\n";
  out << "frame_id,vehicle_id,beam_index,azimuth_index,x,y,z,range\n";
  char buf[256];
  for (const LabeledPoint& p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%ld,%d,%d,%d,%.6f,%.6f,%.6f,%.6f\n",
                  cloud.frame_id, p.vehicle_id, p.beam_index, p.azimuth_index,
                  p.position.x(), p.position.y(), p.position.z(), p.range);
    out << buf;
  }
  finish(out, path);
}

void write_vgop_reports(
    const std::string& path, const std::string& comment,
    const std::vector<std::pair<long, VgopReport>>& rows, double delta) {
  std::ofstream out = open_out(path);
  out << comment << "\n";
  out << "frame_id,vehicle_id,n_top,n_side,n_front,occupied_top,occupied_side,"
         "occupied_front,p_top,p_side,p_front,entropy_bits,point_count\n";
  char buf[512];
  double entropy_sum = 0.0;
  double entropy_min = 0.0;
  long detected = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& [frame_id, r] = rows[i];
    std::snprintf(buf, sizeof(buf),
                  "%ld,%d,%ld,%ld,%ld,%ld,%ld,%ld,%.17g,%.17g,%.17g,%.17g,%ld\n",
                  frame_id, r.vehicle_id, r.n_top, r.n_side, r.n_front,
                  r.occupied_top, r.occupied_side, r.occupied_front, r.p_top,
                  r.p_side, r.p_front, r.entropy_bits, r.point_count);
    out << buf;
    entropy_sum += r.entropy_bits;
    entropy_min = i == 0 ? r.entropy_bits : std::min(entropy_min, r.entropy_bits);
    if ((r.p_top + r.p_side + r.p_front) / 3.0 >= delta) ++detected;
  }
  const long total = static_cast<long>(rows.size());
  const double mean = total > 0 ? entropy_sum / total : 0.0;
  const double recall = total > 0 ? static_cast<double>(detected) / total : 0.0;
  out << "# summary,vehicles=" << total << ",mean_entropy=" << fmt("%.17g", mean)
      << ",min_entropy=" << fmt("%.17g", total > 0 ? entropy_min : 0.0)
      << ",proxy_recall=" << fmt("%.17g", recall) << "\n";
  finish(out, path);
}

void write_baseline_reports(
    const std::string& path, const std::string& comment,
    const std::vector<std::pair<long, BaselineReport>>& rows) {
  std::ofstream out = open_out(path);
  out << comment << "\n";
  out << "frame_id,vehicle_id,point_count,occupied_voxels,total_voxels,"
         "voxel_entropy\n";
  char buf[256];
  for (const auto& [frame_id, r] : rows) {
    std::snprintf(buf, sizeof(buf), "%ld,%d,%ld,%ld,%ld,%.17g\n", frame_id,
                  r.vehicle_id, r.point_count, r.occupied_voxels,
                  r.total_voxels, r.voxel_entropy);
    out << buf;
  }
  finish(out, path);
}

void write_history(const std::string& path, const std::string& comment,
                   const SearchSpace& space,
                   const std::vector<FitnessRecord>& history) {
  std::ofstream out = open_out(path);
  out << comment << "\n";
  out << "iteration,particle";
  for (SearchDim dim : space.dims) out << "," << dim_name(dim);
  for (SearchDim dim : space.dims) out << ",vel_" << dim_name(dim);
  out << ",fitness,personal_best,global_best\n";
  for (const FitnessRecord& rec : history) {
    out << rec.iteration << "," << rec.particle;
    for (Index j = 0; j < space.size(); ++j)
      out << "," << fmt("%.17g", rec.position[j]);
    for (Index j = 0; j < space.size(); ++j)
      out << "," << fmt("%.17g", rec.velocity[j]);
    out << "," << fmt("%.17g", rec.fitness) << ","
        << fmt("%.17g", rec.personal_best) << ","
        << fmt("%.17g", rec.global_best) << "\n";
  }
  finish(out, path);
}

}  // namespace lidopt
