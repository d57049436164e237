#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "volest/estimators.hpp"
#include "volest/geometry.hpp"

namespace volest::bench {

enum class BenchMode { rmse, error_ratio };

// One Monte Carlo experiment: a body, an intensity grid (given either as raw
// intensities or as expected counts n = intensity * |body|), the estimators
// to evaluate and the number of replicates per grid point. Results are a
// pure function of everything here except `workers`, which only controls
// scheduling.
struct BenchConfig {
  geometry::ConvexBody body = geometry::ConvexBody::box(Vector::Zero(1), Vector::Ones(1));
  BenchMode mode = BenchMode::rmse;
  std::vector<double> intensities;      // resolved intensity grid
  std::vector<double> expected_counts;  // n = intensity * |body|, same length
  std::vector<estimators::EstimatorId> estimator_ids;
  int replicates = 500;
  std::uint64_t master_seed = kDefaultSeed;
  long symdiff_samples = 100000;        // per symmetric-difference estimate
  bool check_dilation = false;          // track |vol(dilated hull) - final| per replicate
  std::optional<double> dilation_factor_override;  // testing hook for error_ratio
  int workers = 0;                      // 0 = hardware concurrency; not part of the hash

  static BenchConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::uint64_t config_hash() const;
};

struct CellStats {
  estimators::EstimatorId id{};
  double intensity = 0.0;
  double expected_count = 0.0;
  double mean = 0.0;
  double bias = 0.0;       // mean - |body|
  double rmse_norm = 0.0;  // sqrt(mean squared error) / |body|
  double stderr_mean = 0.0;
  long replicates = 0;
};

struct IntensityMoments {
  double intensity = 0.0;
  double expected_count = 0.0;
  double missing_mean = 0.0;  // E[|C| - |hull|]
  double missing_var = 0.0;
  double missing_stderr = 0.0;
  double nboundary_mean = 0.0;
  double nboundary_stderr = 0.0;
  double identity_gap_mean = 0.0;  // mean of N_bd - intensity * missing
  double identity_gap_stderr = 0.0;
  double max_dilation_gap = 0.0;   // only when check_dilation
  long dilation_checked = 0;
};

struct BenchResult {
  double body_volume = 0.0;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::vector<CellStats> cells;  // grid-major, estimator order as configured
  std::vector<IntensityMoments> moments;
  long total_evaluations = 0;
};

BenchResult run_rmse(const BenchConfig& config);

// Least-squares slope of log(rmse) against log(intensity) for one estimator.
double fit_rate_slope(const BenchResult& result, estimators::EstimatorId id);

struct ErrorRatioRow {
  double intensity = 0.0;
  double expected_count = 0.0;
  double hull_err_mean = 0.0;  // E|C symdiff hull|
  double hull_err_stderr = 0.0;
  double dilated_err_mean = 0.0;  // E|C symdiff dilated hull|
  double dilated_err_stderr = 0.0;
  double ratio = 0.0;  // hull_err_mean / dilated_err_mean
  double ratio_stderr = 0.0;
  long replicates_used = 0;
  long degenerate_skipped = 0;
};

std::vector<ErrorRatioRow> run_error_ratio(const BenchConfig& config);

void write_results_csv(std::ostream& out, const BenchResult& result);
void write_moments_csv(std::ostream& out, const BenchResult& result);
void write_error_ratio_csv(std::ostream& out, const BenchConfig& config,
                           const std::vector<ErrorRatioRow>& rows);
void write_rmse_svg(const std::string& path, const BenchResult& result);
void write_error_ratio_svg(const std::string& path, const std::vector<ErrorRatioRow>& rows);

}  // namespace volest::bench
