#pragma once

#include <Eigen/Dense>

namespace volest {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Relative tolerance used by geometric predicates (orientation tests,
// half-space membership). Scaled by the extent of the input cloud.
inline constexpr double kGeomEps = 1e-9;

// Seed used by the CLI when none is given.
inline constexpr std::uint64_t kDefaultSeed = 1729;

inline constexpr const char* kToolName = "volest";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace volest
