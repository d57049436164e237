#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "volest/hull.hpp"
#include "volest/rng.hpp"
#include "volest/types.hpp"

namespace volest::geometry {

enum class BodyKind { box, ellipsoid, polytope };

// A convex body with exactly known volume and membership test: an
// axis-aligned box, an affine image of the unit ball, or a polytope given by
// vertices. Immutable after construction; all queries are pure.
class ConvexBody {
 public:
  static ConvexBody box(Vector lower, Vector upper);
  static ConvexBody ellipsoid(Vector center, Matrix axes);
  static ConvexBody polytope(Matrix vertices);  // dim x nvertices

  BodyKind kind() const { return kind_; }
  Index dim() const;
  double volume() const { return volume_; }
  bool contains(const Vector& p) const;
  ConvexBody bounding_box() const;

  const Vector& lower() const;
  const Vector& upper() const;
  const Vector& center() const;
  const Matrix& axes() const;
  const Matrix& vertices() const;
  const hull::HullSummary& polytope_hull() const;

 private:
  ConvexBody() = default;

  BodyKind kind_ = BodyKind::box;
  Vector lo_, hi_;          // box bounds / ellipsoid center in lo_
  Matrix mat_;              // ellipsoid axes / polytope vertices
  Matrix inv_axes_;         // ellipsoid only
  hull::HullSummary hull_;  // polytope only
  double volume_ = 0.0;
};

// Coordinate-wise mean of a vertex set (one vertex per column).
Vector barycentre(const Matrix& vertices);

// Dilation of a polytope about `center` by `factor`: every vertex v maps to
// center + factor * (v - center). Volume scales by factor^dim.
ConvexBody dilate(const ConvexBody& poly, const Vector& center, double factor);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo volume of the symmetric difference of two bodies, sampled
// uniformly on the bounding box of their union.
MonteCarloEstimate symdiff_volume(const ConvexBody& a, const ConvexBody& b, long n_samples,
                                  RngStream rng);
MonteCarloEstimate symdiff_volume(const ConvexBody& a, const ConvexBody& b, long n_samples,
                                  std::uint64_t seed);

// Volume of the unit ball in dimension d.
double unit_ball_volume(int d);

// JSON body specification:
//   {"kind":"box","lower":[..],"upper":[..]}
//   {"kind":"ellipsoid","center":[..],"axes":[[..],..]}   (axes rows)
//   {"kind":"polytope","vertices":[[..],..]}
ConvexBody body_from_json(const nlohmann::json& spec);
nlohmann::json to_json(const ConvexBody& body);

}  // namespace volest::geometry
