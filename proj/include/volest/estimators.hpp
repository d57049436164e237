#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "volest/geometry.hpp"
#include "volest/hull.hpp"

namespace volest::estimators {

// Volume estimators, all pure functions of the hull summary (plus the raw
// cloud for the sample-splitting one and the intensity where marked):
//   naive_hull   |C^|
//   naive_count  N / lambda                               (needs intensity)
//   oracle       |C^| + N_bd / lambda                     (needs intensity)
//   plugin       |C^| + N_bd |C^| / N, 0 when N = 0
//   final        |C^| + N_bd |C^| / (N_int + 1)  ==  (N+1)/(N_int+1) |C^|
//   pseudo       final + N_bd exp(-lambda |C^|) / lambda  (needs intensity)
//   gayraud      three-way split: |C^| + (|C''|/N*) * #{X'_i outside C^}
enum class EstimatorId { naive_hull, naive_count, oracle, plugin, final, pseudo, gayraud };

inline constexpr std::array<EstimatorId, 7> kAllEstimators = {
    EstimatorId::naive_hull, EstimatorId::naive_count, EstimatorId::oracle,
    EstimatorId::plugin,     EstimatorId::final,       EstimatorId::pseudo,
    EstimatorId::gayraud};

std::string_view to_string(EstimatorId id);
std::optional<EstimatorId> estimator_from_string(std::string_view name);
bool requires_intensity(EstimatorId id);

struct Estimate {
  EstimatorId id = EstimatorId::naive_hull;
  double value = 0.0;
  bool used_intensity = false;
  bool degenerate = false;  // the sample was too small for the estimator's split
};

Estimate naive_hull(const hull::HullSummary& h);
Estimate naive_count(long n_total, double intensity);
Estimate oracle(const hull::HullSummary& h, double intensity);
Estimate plugin(const hull::HullSummary& h);
Estimate final_volume(const hull::HullSummary& h);
Estimate pseudo(const hull::HullSummary& h, double intensity);
Estimate gayraud(const hull::PointCloud& cloud);

// Dispatch by id; `intensity` must be set for ids with requires_intensity.
Estimate evaluate(EstimatorId id, const hull::HullSummary& h, const hull::PointCloud& cloud,
                  std::optional<double> intensity);

// Set estimator: the hull dilated about its vertex barycentre by
// ((N+1)/(N_int+1))^(1/d), so that its volume matches final_volume(h).
geometry::ConvexBody dilated_hull(const hull::HullSummary& h);

// The dilation factor used by dilated_hull.
double dilation_factor(const hull::HullSummary& h);

}  // namespace volest::estimators
