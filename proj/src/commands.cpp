#include "lidopt/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lidopt/exports.hpp"
#include "lidopt/metric.hpp"
#include "lidopt/optimize.hpp"
#include "lidopt/presets.hpp"
#include "lidopt/raycast.hpp"
#include "lidopt/scene_io.hpp"

namespace fs = std::filesystem;

namespace lidopt {
namespace {

const Deployment kBaselineDeployment{{0.0, 0.0, 2.0}, 0.0, 0.0};

std::string fmt_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string cloud_file_name(long frame_id) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "cloud_%06ld.csv", frame_id);
  return buf;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PresetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidSwarm& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOptimizer;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

struct LoadedRun {
  RunConfig config;
  LidarModel model;
  Scenario scenario;
  std::string comment;
};

LoadedRun load_run(const std::string& config_path, const CliOverrides& overrides) {
  LoadedRun run;
  run.config = load_run_config(config_path);
  apply_overrides(run.config, overrides);
  run.model = load_preset(run.config.preset_path);
  run.scenario =
      load_scenario(run.config.scenario_path, run.config.scenario_format);
  run.comment = config_comment(run.config.config_hash(), run.config.seed);
  return run;
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
}

Deployment require_deployment(const RunConfig& config, const char* command) {
  if (!config.deployment)
    throw ConfigError(std::string(command) + " needs a 'deployment' block");
  return *config.deployment;
}

}  // namespace

int cmd_simulate(const std::string& config_path, const CliOverrides& overrides) {
  return run_guarded([&] {
    LoadedRun run = load_run(config_path, overrides);
    const Deployment deployment = require_deployment(run.config, "simulate");
    ensure_out_dir(run.config.out_dir);

    const RaySet rays = deploy_rays(run.model, deployment);
    FrameCaster caster(rays, run.model);
    const int stride = std::max(1, run.config.objective.frame_stride);

    std::ostringstream manifest;
    manifest << run.comment << "\n";
    manifest << "preset=" << run.model.name << "\n";
    manifest << "scenario=" << run.config.scenario_path << "\n";
    manifest << "format=" << run.config.scenario_format << "\n";
    manifest << "deployment_x_m=" << fmt_double(deployment.position.x()) << "\n";
    manifest << "deployment_y_m=" << fmt_double(deployment.position.y()) << "\n";
    manifest << "deployment_height_m=" << fmt_double(deployment.position.z())
             << "\n";
    manifest << "deployment_tilt_x_deg=" << fmt_double(deployment.tilt_x_deg)
             << "\n";
    manifest << "deployment_tilt_y_deg=" << fmt_double(deployment.tilt_y_deg)
             << "\n";
    manifest << "rays_per_frame=" << rays.ray_count() << "\n";

    long written = 0;
    std::ostringstream frame_lines;
    for (size_t f = 0; f < run.scenario.frames.size(); f += stride) {
      const ScenarioFrame& frame = run.scenario.frames[f];
      const LabeledPointCloud cloud = caster.cast(frame);
      const std::string name = cloud_file_name(frame.frame_id);
      write_point_cloud(run.config.out_dir + "/" + name, run.comment, cloud);
      frame_lines << "frame=" << frame.frame_id << " points=" << cloud.points.size()
                  << " file=" << name << "\n";
      ++written;
    }
    manifest << "frames=" << written << "\n" << frame_lines.str();
    write_text_file(run.config.out_dir + "/manifest.txt", manifest.str());

    std::cout << "simulated " << written << " frame(s) into " << run.config.out_dir
              << "\n";
    return kExitOk;
  });
}

int cmd_evaluate(const std::string& config_path, const CliOverrides& overrides) {
  return run_guarded([&] {
    LoadedRun run = load_run(config_path, overrides);
    const Deployment deployment = require_deployment(run.config, "evaluate");
    ensure_out_dir(run.config.out_dir);

    const RaySet rays = deploy_rays(run.model, deployment);
    FrameCaster caster(rays, run.model);
    CastOptions options;
    options.include_ground_points = false;
    const int stride = std::max(1, run.config.objective.frame_stride);

    std::vector<std::pair<long, VgopReport>> vgop_rows;
    std::vector<std::pair<long, BaselineReport>> baseline_rows;
    for (size_t f = 0; f < run.scenario.frames.size(); f += stride) {
      const ScenarioFrame& frame = run.scenario.frames[f];
      const LabeledPointCloud cloud = caster.cast(frame, options);
      for (const auto& rep :
           evaluate_frame(cloud, frame, run.config.objective.grid))
        vgop_rows.push_back({frame.frame_id, rep});
      for (const auto& rep :
           baseline_metrics(cloud, frame, run.config.baseline_voxel_edge_m))
        baseline_rows.push_back({frame.frame_id, rep});
    }

    write_vgop_reports(run.config.out_dir + "/vgop_report.csv", run.comment,
                       vgop_rows, run.config.objective.delta);
    write_baseline_reports(run.config.out_dir + "/baseline_metrics.csv",
                           run.comment, baseline_rows);

    double entropy_sum = 0.0, entropy_min = 0.0;
    long detected = 0;
    for (size_t i = 0; i < vgop_rows.size(); ++i) {
      const VgopReport& r = vgop_rows[i].second;
      entropy_sum += r.entropy_bits;
      entropy_min =
          i == 0 ? r.entropy_bits : std::min(entropy_min, r.entropy_bits);
      if ((r.p_top + r.p_side + r.p_front) / 3.0 >= run.config.objective.delta)
        ++detected;
    }
    const long total = static_cast<long>(vgop_rows.size());
    std::cout << "vehicles=" << total
              << " mean_entropy=" << (total ? entropy_sum / total : 0.0)
              << " min_entropy=" << (total ? entropy_min : 0.0)
              << " proxy_recall="
              << (total ? static_cast<double>(detected) / total : 0.0) << "\n";
    return kExitOk;
  });
}

int cmd_optimize(const std::string& config_path, const CliOverrides& overrides) {
  return run_guarded([&] {
    LoadedRun run = load_run(config_path, overrides);
    if (!run.config.search_space)
      throw ConfigError("optimize needs a 'search_space' block");
    ensure_out_dir(run.config.out_dir);

    const SearchSpace& space = *run.config.search_space;
    const DeploymentSearchResult result = optimize_deployment(
        run.scenario, run.model, space, run.config.swarm, run.config.objective);
    const DeploymentScore baseline = score_deployment(
        kBaselineDeployment, run.scenario, run.model, run.config.objective);

    write_history(run.config.out_dir + "/history.csv", run.comment, space,
                  result.raw.history);

    std::ostringstream txt;
    txt << run.comment << "\n";
    txt << "preset=" << run.model.name << "\n";
    txt << "scenario=" << run.config.scenario_path << "\n";
    txt << "dimensions=";
    for (Index j = 0; j < space.size(); ++j)
      txt << (j ? "," : "") << dim_name(space.dims[j]);
    txt << "\n";
    txt << "best_x_m=" << fmt_double(result.best.position.x()) << "\n";
    txt << "best_y_m=" << fmt_double(result.best.position.y()) << "\n";
    txt << "best_height_m=" << fmt_double(result.best.position.z()) << "\n";
    txt << "best_tilt_x_deg=" << fmt_double(result.best.tilt_x_deg) << "\n";
    txt << "best_tilt_y_deg=" << fmt_double(result.best.tilt_y_deg) << "\n";
    txt << "best_fitness=" << fmt_double(result.raw.best_fitness) << "\n";
    txt << "best_proxy_recall=" << fmt_double(result.best_score.proxy_recall)
        << "\n";
    txt << "baseline_x_m=" << fmt_double(kBaselineDeployment.position.x())
        << "\n";
    txt << "baseline_y_m=" << fmt_double(kBaselineDeployment.position.y())
        << "\n";
    txt << "baseline_height_m=" << fmt_double(kBaselineDeployment.position.z())
        << "\n";
    txt << "baseline_tilt_x_deg=" << fmt_double(kBaselineDeployment.tilt_x_deg)
        << "\n";
    txt << "baseline_tilt_y_deg=" << fmt_double(kBaselineDeployment.tilt_y_deg)
        << "\n";
    txt << "baseline_fitness=" << fmt_double(baseline.fitness) << "\n";
    txt << "baseline_proxy_recall=" << fmt_double(baseline.proxy_recall) << "\n";
    txt << "iterations=" << run.config.swarm.iterations << "\n";
    txt << "particles=" << run.config.swarm.particles << "\n";
    txt << "history_records=" << result.raw.history.size() << "\n";
    write_text_file(run.config.out_dir + "/optimize_result.txt", txt.str());

    std::cout << "best fitness " << result.raw.best_fitness << " (baseline "
              << baseline.fitness << ") at height "
              << result.best.position.z() << " m, tilt_x "
              << result.best.tilt_x_deg << " deg\n";
    return kExitOk;
  });
}

int cmd_report(const std::string& out_dir) {
  return run_guarded([&] {
    if (!fs::is_directory(out_dir))
      throw IoError("no run directory at " + out_dir);

    auto first_line = [](const fs::path& p) -> std::string {
      std::ifstream in(p);
      std::string line;
      std::getline(in, line);
      return line;
    };
    auto data_lines = [](const fs::path& p) -> long {
      std::ifstream in(p);
      std::string line;
      long n = 0;
      bool header_seen = false;
      while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        if (!header_seen) {
          header_seen = true;
          continue;
        }
        ++n;
      }
      return n;
    };

    std::vector<fs::path> clouds;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("cloud_", 0) == 0 && name.size() > 4 &&
          name.substr(name.size() - 4) == ".csv")
        clouds.push_back(entry.path());
    }
    std::sort(clouds.begin(), clouds.end());

    std::string provenance;
    std::ostringstream body;
    auto note_provenance = [&](const fs::path& p) {
      if (provenance.empty()) {
        const std::string line = first_line(p);
        if (line.rfind("# ", 0) == 0) provenance = line;
      }
    };

    bool found_any = false;
    const fs::path manifest = fs::path(out_dir) / "manifest.txt";
    if (fs::exists(manifest)) {
      found_any = true;
      note_provenance(manifest);
      long points = 0;
      for (const auto& c : clouds) points += data_lines(c);
      body << "simulate: " << clouds.size() << " cloud file(s), " << points
           << " point(s)\n";
    }
    const fs::path vgop = fs::path(out_dir) / "vgop_report.csv";
    if (fs::exists(vgop)) {
      found_any = true;
      note_provenance(vgop);
      body << "evaluate: " << data_lines(vgop) << " vehicle row(s)";
      std::ifstream in(vgop);
      std::string line, summary;
      while (std::getline(in, line))
        if (line.rfind("# summary,", 0) == 0) summary = line.substr(2);
      if (!summary.empty()) body << "; " << summary;
      body << "\n";
    }
    const fs::path history = fs::path(out_dir) / "history.csv";
    if (fs::exists(history)) {
      found_any = true;
      note_provenance(history);
      std::ifstream in(history);
      std::string line, last;
      long rows = -2;  // provenance + header
      while (std::getline(in, line)) {
        ++rows;
        if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0])))
          last = line;
      }
      std::string best;
      const auto pos = last.rfind(',');
      if (pos != std::string::npos) best = last.substr(pos + 1);
      body << "optimize: " << std::max<long>(rows, 0) << " history record(s)";
      if (!best.empty()) body << ", final global best " << best;
      body << "\n";
    }
    const fs::path opt = fs::path(out_dir) / "optimize_result.txt";
    if (fs::exists(opt)) {
      found_any = true;
      note_provenance(opt);
      std::ifstream in(opt);
      std::string line;
      while (std::getline(in, line))
        if (line.rfind("best_", 0) == 0 || line.rfind("baseline_fitness", 0) == 0 ||
            line.rfind("baseline_proxy_recall", 0) == 0)
          body << line << "\n";
    }

    if (!found_any) throw IoError("no recognized exports in " + out_dir);
    if (provenance.empty()) provenance = "# config_hash=unknown seed=unknown";

    const std::string content = provenance + "\n" + body.str();
    write_text_file((fs::path(out_dir) / "report_summary.txt").string(), content);
    std::cout << content;
    return kExitOk;
  });
}

}  // namespace lidopt
