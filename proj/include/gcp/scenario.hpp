#pragma once

// Worked applications: a fishing fleet as a merged family (one GCP per fish
// type), and hotel bookings split across room types.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcp/rate_vector.hpp"
#include "gcp/superpose.hpp"
#include "gcp/thinning.hpp"

namespace gcp {

/// Ordered (label, value) pairs, printed as label=value.
using ScenarioReport = std::vector<std::pair<std::string, double>>;

/// Expected catch E[M(t)] = sum_j j beta_j t, expected catch events of each type
/// E[A_i(t)] = lambda^(i) t, and given b catch events in total,
/// E[A_i | b] = b lambda^(i) / sum_j lambda^(j).
ScenarioReport fishing_report(const MergeFamily& fish_types, double t, std::optional<long long> b);

/// Room-type booking rates for Case I (whole bookings, p_i lambda_j) and
/// Case II (rooms split one by one), each capped at caps[i] rooms per
/// booking when caps is non-empty, with E[M(t)] and E[M_i(t)].
ScenarioReport hotel_report(const RateVector& bookings, const SplitSpec& room_types,
                            const std::vector<std::size_t>& caps, double t);

}  // namespace gcp
