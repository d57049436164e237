#include "volest/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace volest::estimators {

namespace {

void require_intensity_arg(double intensity) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("estimator: intensity must be positive");
  }
}

}  // namespace

std::string_view to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::naive_hull: return "naive_hull";
    case EstimatorId::naive_count: return "naive_count";
    case EstimatorId::oracle: return "oracle";
    case EstimatorId::plugin: return "plugin";
    case EstimatorId::final: return "final";
    case EstimatorId::pseudo: return "pseudo";
    case EstimatorId::gayraud: return "gayraud";
  }
  return "?";
}

std::optional<EstimatorId> estimator_from_string(std::string_view name) {
  for (EstimatorId id : kAllEstimators) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

bool requires_intensity(EstimatorId id) {
  return id == EstimatorId::naive_count || id == EstimatorId::oracle ||
         id == EstimatorId::pseudo;
}

Estimate naive_hull(const hull::HullSummary& h) {
  return Estimate{EstimatorId::naive_hull, h.hull_volume, false, false};
}

Estimate naive_count(long n_total, double intensity) {
  require_intensity_arg(intensity);
  if (n_total < 0) throw std::invalid_argument("naive_count: negative count");
  return Estimate{EstimatorId::naive_count,
                  static_cast<double>(n_total) / intensity, true, false};
}

Estimate oracle(const hull::HullSummary& h, double intensity) {
  require_intensity_arg(intensity);
  return Estimate{EstimatorId::oracle,
                  h.hull_volume + static_cast<double>(h.n_boundary) / intensity, true, false};
}

Estimate plugin(const hull::HullSummary& h) {
  // Summed as |C^| + N_bd |C^| / N, mirroring final_volume term for term, so
  // the ordering final >= plugin also holds exactly in floating point.
  double value = 0.0;
  if (h.n_total > 0) {
    value = h.hull_volume + h.hull_volume * static_cast<double>(h.n_boundary) /
                                static_cast<double>(h.n_total);
  }
  return Estimate{EstimatorId::plugin, value, false, false};
}

Estimate final_volume(const hull::HullSummary& h) {
  // |C^| + N_bd |C^| / (N_int + 1); adding the boundary term keeps
  // pseudo >= final exact in floating point as well.
  const double correction = h.hull_volume * static_cast<double>(h.n_boundary) /
                            static_cast<double>(h.n_interior + 1);
  return Estimate{EstimatorId::final, h.hull_volume + correction, false, false};
}

Estimate pseudo(const hull::HullSummary& h, double intensity) {
  require_intensity_arg(intensity);
  const double tail = static_cast<double>(h.n_boundary) *
                      std::exp(-intensity * h.hull_volume) / intensity;
  return Estimate{EstimatorId::pseudo, final_volume(h).value + tail, true, false};
}

Estimate gayraud(const hull::PointCloud& cloud) {
  const long n = static_cast<long>(cloud.size());
  const long part = n / 3;
  if (part == 0) {
    const auto whole = hull::convex_hull(cloud);
    return Estimate{EstimatorId::gayraud, whole.hull_volume, false, true};
  }
  const Index d = cloud.dim();
  // First part plus the remainder points; the middle and last parts have
  // exactly `part` points each.
  Matrix first(d, n - 2 * part);
  first.leftCols(part) = cloud.points.leftCols(part);
  first.rightCols(n - 3 * part) = cloud.points.rightCols(n - 3 * part);
  const Matrix probe = cloud.points.middleCols(part, part);
  const Matrix third = cloud.points.middleCols(2 * part, part);

  const auto base = hull::convex_hull(hull::PointCloud{std::move(first)});
  const auto ref = hull::convex_hull(hull::PointCloud{third});
  long outside = 0;
  for (Index i = 0; i < probe.cols(); ++i) {
    if (!base.contains(probe.col(i))) ++outside;
  }
  const double value = base.hull_volume + ref.hull_volume *
                                              static_cast<double>(outside) /
                                              static_cast<double>(part);
  return Estimate{EstimatorId::gayraud, value, false, false};
}

Estimate evaluate(EstimatorId id, const hull::HullSummary& h, const hull::PointCloud& cloud,
                  std::optional<double> intensity) {
  if (requires_intensity(id) && !intensity.has_value()) {
    throw std::invalid_argument(std::string("estimator '") + std::string(to_string(id)) +
                                "' requires the intensity");
  }
  switch (id) {
    case EstimatorId::naive_hull: return naive_hull(h);
    case EstimatorId::naive_count: return naive_count(h.n_total, *intensity);
    case EstimatorId::oracle: return oracle(h, *intensity);
    case EstimatorId::plugin: return plugin(h);
    case EstimatorId::final: return final_volume(h);
    case EstimatorId::pseudo: return pseudo(h, *intensity);
    case EstimatorId::gayraud: return gayraud(cloud);
  }
  throw std::logic_error("evaluate: unknown estimator");
}

double dilation_factor(const hull::HullSummary& h) {
  return std::pow(static_cast<double>(h.n_total + 1) / static_cast<double>(h.n_interior + 1),
                  1.0 / static_cast<double>(h.dim));
}

geometry::ConvexBody dilated_hull(const hull::HullSummary& h) {
  if (!(h.hull_volume > 0.0)) {
    throw std::invalid_argument("dilated_hull: hull is degenerate");
  }
  const Vector center = geometry::barycentre(h.vertices);
  Matrix v = h.vertices;
  const double factor = dilation_factor(h);
  v = ((v.colwise() - center) * factor).colwise() + center;
  return geometry::ConvexBody::polytope(std::move(v));
}

}  // namespace volest::estimators
