#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "volest/quickhull.hpp"
#include "volest/types.hpp"

namespace volest::hull {

// Ordered point cloud, one point per column. Order is significant: the
// three-way split estimator slices the cloud by index.
struct PointCloud {
  Matrix points;

  PointCloud() : points(0, 0) {}
  explicit PointCloud(Matrix pts) : points(std::move(pts)) {}

  Index dim() const { return points.rows(); }
  Index size() const { return points.cols(); }
};

enum class PointLabel : char { interior = 0, boundary = 1 };

// Convex hull of a cloud plus the three statistics the estimators consume:
// hull volume, the number of cloud points that are hull vertices (n_boundary)
// and the rest (n_interior). Duplicates of a vertex beyond the first
// occurrence count as interior, so n_total == n_boundary + n_interior always.
struct HullSummary {
  int dim = 0;
  int affine_dim = -1;  // -1 empty, 0 point, ..., dim full-dimensional
  Matrix vertices;      // dim x n_boundary, ordered by first occurrence in the cloud
  std::vector<int> vertex_cloud_ids;  // first cloud index of each hull vertex
  std::vector<qh::Facet> facets;      // vertices index columns of `vertices`
  double hull_volume = 0.0;
  long n_total = 0;
  long n_boundary = 0;
  long n_interior = 0;
  double scale = 0.0;  // cloud extent; basis of the containment tolerance
  Vector interior_point;  // fan apex, valid when hull_volume > 0
  // Carrier flat of the hull when affine_dim < dim.
  Vector flat_origin;
  Matrix flat_basis;  // dim x affine_dim, orthonormal columns

  double tolerance() const { return kGeomEps * (1.0 + scale); }

  // Closed membership test with tolerance `tol` (default: the hull's own).
  bool contains(const Vector& p, double tol) const;
  bool contains(const Vector& p) const { return contains(p, tolerance()); }
};

// Convex hull with exact triangulated volume. Works in any dimension >= 1 and
// handles degenerate (lower-dimensional) clouds, reporting volume 0 for them.
HullSummary convex_hull(const PointCloud& cloud);

// Per-point labels consistent with the summary's counts. The hull must have
// been built from this cloud.
std::vector<PointLabel> classify_points(const PointCloud& cloud, const HullSummary& hull);

// Andrew's monotone chain, d = 2 only: hull vertex column ids in
// counter-clockwise order. Points within tolerance of an edge are dropped.
std::vector<int> monotone_chain(const Matrix& pts, double tol);

// Headerless CSV, one point per row, full round-trip precision.
PointCloud read_cloud_csv(const std::string& path);
void write_cloud_csv(const std::string& path, const PointCloud& cloud);

nlohmann::json to_json(const HullSummary& h);

}  // namespace volest::hull
