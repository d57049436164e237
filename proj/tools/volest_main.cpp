#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "volest/bench.hpp"
#include "volest/estimators.hpp"
#include "volest/geometry.hpp"
#include "volest/hull.hpp"
#include "volest/ppp.hpp"
#include "volest/types.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace volest;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

geometry::ConvexBody load_body(const std::string& path) {
  return geometry::body_from_json(load_json(path));
}

void log_invocation(const std::string& what, const json& detail) {
  json line = detail;
  line["command"] = what;
  line["tool"] = std::string(kToolName) + " " + kToolVersion;
  std::cerr << line.dump() << "\n";
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_sample(const std::string& body_path, double intensity, std::uint64_t seed,
               const std::string& out_path) {
  if (!(intensity > 0.0)) {
    std::cerr << "sample: intensity must be positive\n";
    return kExitUsage;
  }
  geometry::ConvexBody body = load_body(body_path);
  ppp::PppConfig config{body, intensity, seed};
  log_invocation("sample", {{"body", geometry::to_json(body)},
                            {"intensity", intensity},
                            {"seed", seed},
                            {"out", out_path}});
  const auto cloud = ppp::sample_ppp(config);
  hull::write_cloud_csv(out_path, cloud);
  json sidecar;
  sidecar["body"] = geometry::to_json(body);
  sidecar["intensity"] = intensity;
  sidecar["seed"] = seed;
  sidecar["n"] = cloud.size();
  sidecar["tool"] = std::string(kToolName) + " " + kToolVersion;
  std::ofstream meta(out_path + ".json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write sidecar for " + out_path);
  meta << sidecar.dump(2) << "\n";
  std::cout << cloud.size() << "\n";
  return kExitOk;
}

int cmd_estimate(const std::string& cloud_path, std::optional<double> intensity,
                 const std::string& truth_path, bool as_json) {
  if (intensity && !(*intensity > 0.0)) {
    std::cerr << "estimate: intensity must be positive\n";
    return kExitUsage;
  }
  std::optional<geometry::ConvexBody> truth;
  if (!truth_path.empty()) truth = load_body(truth_path);
  const auto cloud = hull::read_cloud_csv(cloud_path);
  if (cloud.size() == 0) std::cerr << "warning: empty cloud, all estimates are zero\n";
  log_invocation("estimate", {{"cloud", cloud_path},
                              {"n", cloud.size()},
                              {"intensity", intensity ? json(*intensity) : json(nullptr)}});
  const auto summary = hull::convex_hull(cloud);

  std::vector<estimators::Estimate> rows;
  for (auto id : estimators::kAllEstimators) {
    if (estimators::requires_intensity(id) && !intensity) continue;  // gated on the flag
    rows.push_back(estimators::evaluate(id, summary, cloud, intensity));
  }

  if (as_json) {
    json out;
    out["n"] = summary.n_total;
    out["n_boundary"] = summary.n_boundary;
    out["n_interior"] = summary.n_interior;
    out["hull"] = hull::to_json(summary);
    if (intensity) out["intensity"] = *intensity;
    auto arr = json::array();
    for (const auto& e : rows) {
      json r;
      r["estimator"] = std::string(estimators::to_string(e.id));
      r["value"] = e.value;
      r["used_intensity"] = e.used_intensity;
      r["degenerate"] = e.degenerate;
      if (truth) r["error"] = e.value - truth->volume();
      arr.push_back(std::move(r));
    }
    out["estimates"] = std::move(arr);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  std::cout << "n=" << summary.n_total << " n_boundary=" << summary.n_boundary
            << " n_interior=" << summary.n_interior << " hull_volume=" << fmt17(summary.hull_volume)
            << "\n";
  for (const auto& e : rows) {
    std::cout << estimators::to_string(e.id);
    for (size_t pad = std::string(estimators::to_string(e.id)).size(); pad < 12; ++pad) {
      std::cout << ' ';
    }
    std::cout << fmt17(e.value);
    if (truth) std::cout << "  error " << fmt17(e.value - truth->volume());
    if (e.degenerate) std::cout << "  (degenerate split)";
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_dilate(const std::string& cloud_path, const std::string& out_path) {
  const auto cloud = hull::read_cloud_csv(cloud_path);
  log_invocation("dilate", {{"cloud", cloud_path}, {"out", out_path}});
  const auto summary = hull::convex_hull(cloud);
  if (!(summary.hull_volume > 0.0)) {
    std::cerr << "dilate: hull is degenerate (volume 0)\n";
    return kExitRuntime;
  }
  const auto dilated = estimators::dilated_hull(summary);
  hull::write_cloud_csv(out_path, hull::PointCloud{dilated.vertices()});
  std::cout << fmt17(dilated.volume()) << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, int workers,
              bool plots) {
  auto config = bench::BenchConfig::from_json(load_json(config_path));
  config.workers = workers;
  log_invocation("bench", {{"config", config_path},
                           {"config_hash", config.config_hash()},
                           {"out", out_dir},
                           {"workers", workers},
                           {"seed", config.master_seed}});
  fs::create_directories(out_dir);
  if (plots) fs::create_directories(fs::path(out_dir) / "plots");

  if (config.mode == bench::BenchMode::rmse) {
    const auto result = bench::run_rmse(config);
    {
      std::ofstream out(fs::path(out_dir) / "results.csv", std::ios::binary);
      bench::write_results_csv(out, result);
    }
    {
      std::ofstream out(fs::path(out_dir) / "moments.csv", std::ios::binary);
      bench::write_moments_csv(out, result);
    }
    if (plots) bench::write_rmse_svg((fs::path(out_dir) / "plots" / "rmse.svg").string(), result);
  } else {
    const auto rows = bench::run_error_ratio(config);
    std::ofstream out(fs::path(out_dir) / "error_ratio.csv", std::ios::binary);
    bench::write_error_ratio_csv(out, config, rows);
    if (plots) {
      bench::write_error_ratio_svg((fs::path(out_dir) / "plots" / "error_ratio.svg").string(),
                                   rows);
    }
  }
  std::cout << "wrote " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume estimation for convex bodies from point samples"};
  app.require_subcommand(1);

  std::string body_path, cloud_path, out_path, truth_path, config_path, out_dir;
  double intensity = 0.0;
  std::uint64_t seed = kDefaultSeed;
  bool as_json = false;
  bool no_plots = false;
  int workers = 0;

  auto* sample = app.add_subcommand("sample", "Sample a Poisson point cloud on a body");
  sample->add_option("--body", body_path, "body spec JSON file")->required();
  sample->add_option("--intensity", intensity, "points per unit volume")->required();
  sample->add_option("--seed", seed, "RNG seed (default " + std::to_string(kDefaultSeed) + ")");
  sample->add_option("--out", out_path, "output cloud CSV")->required();

  auto* estimate = app.add_subcommand("estimate", "Estimate the volume from a cloud CSV");
  estimate->add_option("--cloud", cloud_path, "cloud CSV file")->required();
  double est_intensity = -1.0;
  estimate->add_option("--intensity", est_intensity, "known intensity (enables the estimators that use it)");
  estimate->add_option("--truth", truth_path, "body spec JSON for an error column");
  estimate->add_flag("--json", as_json, "machine-readable output");

  auto* dilate = app.add_subcommand("dilate", "Write the dilated-hull set estimate of a cloud");
  dilate->add_option("--cloud", cloud_path, "cloud CSV file")->required();
  dilate->add_option("--out", out_path, "output vertex CSV")->required();

  auto* benchcmd = app.add_subcommand("bench", "Run a Monte Carlo experiment");
  benchcmd->add_option("--config", config_path, "bench config JSON")->required();
  benchcmd->add_option("--out", out_dir, "output directory")->required();
  benchcmd->add_option("--workers", workers, "worker threads (0 = all cores)");
  benchcmd->add_flag("--no-plots", no_plots, "skip SVG plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sample->parsed()) return cmd_sample(body_path, intensity, seed, out_path);
    if (estimate->parsed()) {
      std::optional<double> lam;
      if (estimate->count("--intensity") > 0) lam = est_intensity;
      return cmd_estimate(cloud_path, lam, truth_path, as_json);
    }
    if (dilate->parsed()) return cmd_dilate(cloud_path, out_path);
    if (benchcmd->parsed()) return cmd_bench(config_path, out_dir, workers, !no_plots);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
