#include "volest/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "volest/ppp.hpp"
#include "volest/svg.hpp"

namespace volest::bench {

namespace {

// Stream tags so that the per-purpose generators never collide.
constexpr std::uint64_t kTagCloud = 1;
constexpr std::uint64_t kTagSymdiffHull = 2;
constexpr std::uint64_t kTagSymdiffDilated = 3;

void validate(const BenchConfig& c) {
  if (c.replicates < 2) throw std::invalid_argument("bench: replicates must be >= 2");
  if (c.intensities.empty()) throw std::invalid_argument("bench: empty intensity grid");
  for (double lam : c.intensities) {
    if (!(lam > 0.0) || !std::isfinite(lam)) {
      throw std::invalid_argument("bench: intensities must be positive");
    }
  }
  if (c.symdiff_samples < 1) throw std::invalid_argument("bench: symdiff_samples must be >= 1");
}

int resolve_workers(int requested, long tasks) {
  int w = requested;
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w <= 0) w = 1;
  return static_cast<int>(std::min<long>(w, std::max<long>(tasks, 1)));
}

// Run `tasks` indexed jobs on `workers` threads. Results must be written to
// preassigned slots so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(long tasks, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (long t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const long t = next.fetch_add(1);
      if (t >= tasks) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // sample variance (divide by M-1)
};

MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar out;
  const double m = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= m;
  double acc = 0.0;
  for (double x : xs) acc += (x - out.mean) * (x - out.mean);
  out.var = xs.size() > 1 ? acc / (m - 1.0) : 0.0;
  return out;
}

std::string hex_hash(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_header(std::ostream& out, std::uint64_t hash, std::uint64_t seed) {
  out << "# config_hash=" << hex_hash(hash) << " seed=" << seed << "\n";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

BenchConfig BenchConfig::from_json(const nlohmann::json& j) {
  BenchConfig c;
  c.body = geometry::body_from_json(j.at("body"));
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "rmse") {
      c.mode = BenchMode::rmse;
    } else if (mode == "error_ratio") {
      c.mode = BenchMode::error_ratio;
    } else {
      throw std::invalid_argument("bench config: unknown mode '" + mode + "'");
    }
  }
  const bool has_lam = j.contains("intensities");
  const bool has_n = j.contains("expected_counts");
  if (has_lam == has_n) {
    throw std::invalid_argument(
        "bench config: give exactly one of \"intensities\" or \"expected_counts\"");
  }
  if (has_lam) {
    c.intensities = j.at("intensities").get<std::vector<double>>();
    for (double lam : c.intensities) c.expected_counts.push_back(lam * c.body.volume());
  } else {
    c.expected_counts = j.at("expected_counts").get<std::vector<double>>();
    for (double n : c.expected_counts) c.intensities.push_back(n / c.body.volume());
  }
  if (j.contains("estimators")) {
    for (const auto& name : j.at("estimators")) {
      const auto id = estimators::estimator_from_string(name.get<std::string>());
      if (!id) {
        throw std::invalid_argument("bench config: unknown estimator '" +
                                    name.get<std::string>() + "'");
      }
      c.estimator_ids.push_back(*id);
    }
  } else {
    c.estimator_ids.assign(estimators::kAllEstimators.begin(), estimators::kAllEstimators.end());
  }
  if (j.contains("replicates")) c.replicates = j.at("replicates").get<int>();
  if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("symdiff_samples")) c.symdiff_samples = j.at("symdiff_samples").get<long>();
  if (j.contains("check_dilation")) c.check_dilation = j.at("check_dilation").get<bool>();
  if (j.contains("dilation_factor_override")) {
    c.dilation_factor_override = j.at("dilation_factor_override").get<double>();
  }
  validate(c);
  return c;
}

nlohmann::json BenchConfig::to_json() const {
  // Canonical form: the grid is stored as resolved intensities; the expected
  // counts are derived, so the hash identifies the experiment itself.
  nlohmann::json j;
  j["body"] = geometry::to_json(body);
  j["mode"] = mode == BenchMode::rmse ? "rmse" : "error_ratio";
  j["intensities"] = intensities;
  auto est = nlohmann::json::array();
  for (auto id : estimator_ids) est.push_back(std::string(estimators::to_string(id)));
  j["estimators"] = std::move(est);
  j["replicates"] = replicates;
  j["master_seed"] = master_seed;
  j["symdiff_samples"] = symdiff_samples;
  j["check_dilation"] = check_dilation;
  if (dilation_factor_override) j["dilation_factor_override"] = *dilation_factor_override;
  return j;
}

std::uint64_t BenchConfig::config_hash() const {
  const std::string dump = to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

BenchResult run_rmse(const BenchConfig& config) {
  validate(config);
  const double body_volume = config.body.volume();
  const long grid = static_cast<long>(config.intensities.size());
  const long reps = config.replicates;
  const long n_est = static_cast<long>(config.estimator_ids.size());
  const long tasks = grid * reps;

  struct Rep {
    std::vector<double> values;
    double missing = 0.0;
    double nboundary = 0.0;
    double dilation_gap = 0.0;
    bool dilation_checked = false;
  };
  std::vector<Rep> records(static_cast<size_t>(tasks));
  const RngStream root(config.master_seed);

  parallel_for(tasks, resolve_workers(config.workers, tasks), [&](long t) {
    const long gi = t / reps;
    const long rep = t % reps;
    const double lam = config.intensities[static_cast<size_t>(gi)];
    try {
      const auto cloud = ppp::sample_ppp(
          config.body, lam,
          root.stream(kTagCloud).stream(static_cast<std::uint64_t>(gi)).stream(
              static_cast<std::uint64_t>(rep)));
      const auto summary = hull::convex_hull(cloud);
      Rep& r = records[static_cast<size_t>(t)];
      r.values.reserve(static_cast<size_t>(n_est));
      for (auto id : config.estimator_ids) {
        r.values.push_back(estimators::evaluate(id, summary, cloud, lam).value);
      }
      r.missing = body_volume - summary.hull_volume;
      r.nboundary = static_cast<double>(summary.n_boundary);
      if (config.check_dilation && summary.hull_volume > 0.0) {
        const double target = estimators::final_volume(summary).value;
        const double got = estimators::dilated_hull(summary).volume();
        r.dilation_gap = std::abs(got - target) / target;
        r.dilation_checked = true;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("bench replicate (intensity index " + std::to_string(gi) +
                               ", replicate " + std::to_string(rep) + "): " + e.what());
    }
  });

  BenchResult result;
  result.body_volume = body_volume;
  result.config_hash = config.config_hash();
  result.master_seed = config.master_seed;
  result.total_evaluations = tasks * n_est;
  std::vector<double> buf(static_cast<size_t>(reps));
  for (long gi = 0; gi < grid; ++gi) {
    const Rep* base = &records[static_cast<size_t>(gi * reps)];
    for (long e = 0; e < n_est; ++e) {
      CellStats cell;
      cell.id = config.estimator_ids[static_cast<size_t>(e)];
      cell.intensity = config.intensities[static_cast<size_t>(gi)];
      cell.expected_count = config.expected_counts[static_cast<size_t>(gi)];
      cell.replicates = reps;
      double se = 0.0;
      for (long r = 0; r < reps; ++r) {
        const double v = base[r].values[static_cast<size_t>(e)];
        buf[static_cast<size_t>(r)] = v;
        const double err = v - body_volume;
        se += err * err;
      }
      const MeanVar mv = mean_var(buf);
      cell.mean = mv.mean;
      cell.bias = mv.mean - body_volume;
      cell.rmse_norm = std::sqrt(se / static_cast<double>(reps)) / body_volume;
      cell.stderr_mean = std::sqrt(mv.var / static_cast<double>(reps));
      result.cells.push_back(cell);
    }

    IntensityMoments mom;
    mom.intensity = config.intensities[static_cast<size_t>(gi)];
    mom.expected_count = config.expected_counts[static_cast<size_t>(gi)];
    std::vector<double> missing(static_cast<size_t>(reps)), nb(static_cast<size_t>(reps)),
        gap(static_cast<size_t>(reps));
    for (long r = 0; r < reps; ++r) {
      missing[static_cast<size_t>(r)] = base[r].missing;
      nb[static_cast<size_t>(r)] = base[r].nboundary;
      gap[static_cast<size_t>(r)] = base[r].nboundary - mom.intensity * base[r].missing;
      if (base[r].dilation_checked) {
        mom.max_dilation_gap = std::max(mom.max_dilation_gap, base[r].dilation_gap);
        ++mom.dilation_checked;
      }
    }
    const MeanVar mm = mean_var(missing);
    mom.missing_mean = mm.mean;
    mom.missing_var = mm.var;
    mom.missing_stderr = std::sqrt(mm.var / static_cast<double>(reps));
    const MeanVar nbv = mean_var(nb);
    mom.nboundary_mean = nbv.mean;
    mom.nboundary_stderr = std::sqrt(nbv.var / static_cast<double>(reps));
    const MeanVar gv = mean_var(gap);
    mom.identity_gap_mean = gv.mean;
    mom.identity_gap_stderr = std::sqrt(gv.var / static_cast<double>(reps));
    result.moments.push_back(mom);
  }
  return result;
}

double fit_rate_slope(const BenchResult& result, estimators::EstimatorId id) {
  std::vector<double> xs, ys;
  for (const auto& cell : result.cells) {
    if (cell.id != id) continue;
    if (!(cell.intensity > 0.0) || !(cell.rmse_norm > 0.0)) {
      throw std::invalid_argument("fit_rate_slope: nonpositive intensity or rmse");
    }
    xs.push_back(std::log(cell.intensity));
    ys.push_back(std::log(cell.rmse_norm));
  }
  if (xs.size() < 3) throw std::invalid_argument("fit_rate_slope: needs at least 3 grid points");
  const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate_slope: degenerate grid");
  return sxy / sxx;
}

std::vector<ErrorRatioRow> run_error_ratio(const BenchConfig& config) {
  validate(config);
  const auto kind = config.body.kind();
  if (kind != geometry::BodyKind::polytope && kind != geometry::BodyKind::ellipsoid) {
    throw std::invalid_argument("error_ratio: body must be a polytope or an ellipsoid");
  }
  const long grid = static_cast<long>(config.intensities.size());
  const long reps = config.replicates;
  const long tasks = grid * reps;

  struct Rep {
    double hull_err = 0.0;
    double dilated_err = 0.0;
    bool ok = false;
  };
  std::vector<Rep> records(static_cast<size_t>(tasks));
  const RngStream root(config.master_seed);

  parallel_for(tasks, resolve_workers(config.workers, tasks), [&](long t) {
    const long gi = t / reps;
    const long rep = t % reps;
    const double lam = config.intensities[static_cast<size_t>(gi)];
    try {
      const auto cloud = ppp::sample_ppp(
          config.body, lam,
          root.stream(kTagCloud).stream(static_cast<std::uint64_t>(gi)).stream(
              static_cast<std::uint64_t>(rep)));
      const auto summary = hull::convex_hull(cloud);
      Rep& r = records[static_cast<size_t>(t)];
      if (!(summary.hull_volume > 0.0)) return;  // skipped, counted below
      const auto hull_body = geometry::ConvexBody::polytope(summary.vertices);
      const double factor = config.dilation_factor_override
                                ? *config.dilation_factor_override
                                : estimators::dilation_factor(summary);
      const auto dilated =
          geometry::dilate(hull_body, geometry::barycentre(summary.vertices), factor);
      const auto gi_u = static_cast<std::uint64_t>(gi);
      const auto rep_u = static_cast<std::uint64_t>(rep);
      r.hull_err = geometry::symdiff_volume(
                       config.body, hull_body, config.symdiff_samples,
                       root.stream(kTagSymdiffHull).stream(gi_u).stream(rep_u))
                       .value;
      r.dilated_err = geometry::symdiff_volume(
                          config.body, dilated, config.symdiff_samples,
                          root.stream(kTagSymdiffDilated).stream(gi_u).stream(rep_u))
                          .value;
      r.ok = true;
    } catch (const std::exception& e) {
      throw std::runtime_error("error_ratio replicate (intensity index " + std::to_string(gi) +
                               ", replicate " + std::to_string(rep) + "): " + e.what());
    }
  });

  std::vector<ErrorRatioRow> rows;
  for (long gi = 0; gi < grid; ++gi) {
    ErrorRatioRow row;
    row.intensity = config.intensities[static_cast<size_t>(gi)];
    row.expected_count = config.expected_counts[static_cast<size_t>(gi)];
    std::vector<double> h, d;
    for (long r = 0; r < reps; ++r) {
      const Rep& rec = records[static_cast<size_t>(gi * reps + r)];
      if (!rec.ok) continue;
      h.push_back(rec.hull_err);
      d.push_back(rec.dilated_err);
    }
    row.replicates_used = static_cast<long>(h.size());
    row.degenerate_skipped = reps - row.replicates_used;
    if (h.size() < 2) throw std::runtime_error("error_ratio: fewer than 2 usable replicates");
    const double m = static_cast<double>(h.size());
    const MeanVar hv = mean_var(h);
    const MeanVar dv = mean_var(d);
    double cov = 0.0;
    for (size_t i = 0; i < h.size(); ++i) cov += (h[i] - hv.mean) * (d[i] - dv.mean);
    cov /= (m - 1.0);
    row.hull_err_mean = hv.mean;
    row.hull_err_stderr = std::sqrt(hv.var / m);
    row.dilated_err_mean = dv.mean;
    row.dilated_err_stderr = std::sqrt(dv.var / m);
    row.ratio = hv.mean / dv.mean;
    // Delta method for the ratio of correlated means.
    const double var_ratio =
        (hv.var / (dv.mean * dv.mean) +
         dv.var * hv.mean * hv.mean / std::pow(dv.mean, 4) -
         2.0 * cov * hv.mean / std::pow(dv.mean, 3)) /
        m;
    row.ratio_stderr = std::sqrt(std::max(var_ratio, 0.0));
    rows.push_back(row);
  }
  return rows;
}

void write_results_csv(std::ostream& out, const BenchResult& result) {
  write_header(out, result.config_hash, result.master_seed);
  out << "estimator,intensity,mean,bias,rmse,stderr\n";
  for (const auto& c : result.cells) {
    out << estimators::to_string(c.id) << ',' << fmt(c.intensity) << ',' << fmt(c.mean) << ','
        << fmt(c.bias) << ',' << fmt(c.rmse_norm) << ',' << fmt(c.stderr_mean) << '\n';
  }
}

void write_moments_csv(std::ostream& out, const BenchResult& result) {
  write_header(out, result.config_hash, result.master_seed);
  out << "intensity,missing_mean,missing_var,missing_stderr,nboundary_mean,nboundary_stderr,"
         "identity_gap,identity_gap_stderr,max_dilation_gap\n";
  for (const auto& mres : result.moments) {
    out << fmt(mres.intensity) << ',' << fmt(mres.missing_mean) << ',' << fmt(mres.missing_var)
        << ',' << fmt(mres.missing_stderr) << ',' << fmt(mres.nboundary_mean) << ','
        << fmt(mres.nboundary_stderr) << ',' << fmt(mres.identity_gap_mean) << ','
        << fmt(mres.identity_gap_stderr) << ',' << fmt(mres.max_dilation_gap) << '\n';
  }
}

void write_error_ratio_csv(std::ostream& out, const BenchConfig& config,
                           const std::vector<ErrorRatioRow>& rows) {
  write_header(out, config.config_hash(), config.master_seed);
  out << "expected_count,intensity,hull_err,hull_err_stderr,dilated_err,dilated_err_stderr,"
         "ratio,ratio_stderr,replicates_used,degenerate_skipped\n";
  for (const auto& r : rows) {
    out << fmt(r.expected_count) << ',' << fmt(r.intensity) << ',' << fmt(r.hull_err_mean) << ','
        << fmt(r.hull_err_stderr) << ',' << fmt(r.dilated_err_mean) << ','
        << fmt(r.dilated_err_stderr) << ',' << fmt(r.ratio) << ',' << fmt(r.ratio_stderr) << ','
        << r.replicates_used << ',' << r.degenerate_skipped << '\n';
  }
}

void write_rmse_svg(const std::string& path, const BenchResult& result) {
  std::vector<svg::Series> series;
  for (const auto& cell : result.cells) {
    svg::Series* s = nullptr;
    const std::string name(estimators::to_string(cell.id));
    for (auto& existing : series) {
      if (existing.name == name) {
        s = &existing;
        break;
      }
    }
    if (s == nullptr) {
      series.push_back(svg::Series{name, {}, {}});
      s = &series.back();
    }
    s->x.push_back(cell.expected_count);
    s->y.push_back(cell.rmse_norm);
  }
  svg::ChartSpec spec;
  spec.title = "Normalized RMSE vs expected count";
  spec.xlabel = "expected count n";
  spec.ylabel = "RMSE / volume";
  spec.log_x = true;
  spec.log_y = true;
  svg::write_line_chart(path, spec, series);
}

void write_error_ratio_svg(const std::string& path, const std::vector<ErrorRatioRow>& rows) {
  svg::Series s{"hull error / dilated error", {}, {}};
  for (const auto& r : rows) {
    s.x.push_back(r.expected_count);
    s.y.push_back(r.ratio);
  }
  svg::ChartSpec spec;
  spec.title = "Set-estimation error ratio";
  spec.xlabel = "expected count n";
  spec.ylabel = "ratio";
  spec.log_x = true;
  svg::write_line_chart(path, spec, {s});
}

}  // namespace volest::bench
