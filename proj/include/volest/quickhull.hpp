#pragma once

#include <variant>
#include <vector>

#include "volest/types.hpp"

namespace volest::qh {

// One simplicial facet of a convex hull: d vertex indices into the point
// matrix plus the outward unit normal n and offset b, with n.x <= b inside.
struct Facet {
  std::vector<int> vertices;
  Vector normal;
  double offset = 0.0;
};

struct HullData {
  std::vector<Facet> facets;
  std::vector<int> vertex_ids;  // sorted column indices of hull vertices
  double volume = 0.0;
  Vector interior;              // strictly interior point, apex of the fan
};

// Affine span reported when the input is not full-dimensional.
struct AffineSpan {
  int rank = 0;
  Vector origin;
  Matrix basis;  // d x rank, orthonormal columns
};

using Outcome = std::variant<HullData, AffineSpan>;

// Quickhull over the columns of pts (one point per column), dimension >= 2.
// Points within distance tol of a facet hyperplane count as lying on it and
// never become hull vertices. Duplicate columns must be removed beforehand.
Outcome quickhull(const Matrix& pts, double tol);

// Length of the bounding-box diagonal; the natural scale for tolerances.
double extent_scale(const Matrix& pts);

}  // namespace volest::qh
