#pragma once

#include <cstdint>

#include "volest/geometry.hpp"
#include "volest/hull.hpp"
#include "volest/rng.hpp"

namespace volest::ppp {

// Observation model: N ~ Poisson(intensity * |body|) points, i.i.d. uniform
// on the body. Everything is a pure function of the seed.
struct PppConfig {
  geometry::ConvexBody body;
  double intensity = 0.0;  // expected points per unit volume
  std::uint64_t seed = kDefaultSeed;
};

// Exact Poisson draw: sequential-search inversion for small means,
// transformed rejection for large ones.
long sample_poisson(double mean, RngStream& rng);

// Uniform draw on a body: closed form for boxes, mapped unit-ball draw for
// ellipsoids, bounding-box rejection for polytopes. The polytope path throws
// after 10^6 consecutive rejections.
Vector sample_uniform(const geometry::ConvexBody& body, RngStream& rng);

hull::PointCloud sample_ppp(const geometry::ConvexBody& body, double intensity, RngStream rng);
hull::PointCloud sample_ppp(const PppConfig& config);

}  // namespace volest::ppp
