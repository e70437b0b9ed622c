#pragma once

// Type II splitting: a size-j jump is divided unit by unit with j independent
// categorical draws, so several components can jump at the same instant.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gcp/rate_vector.hpp"
#include "gcp/simulate.hpp"
#include "gcp/thinning.hpp"

namespace gcp {

using SplitSpecII = SplitSpec;

/// Rate at which component i jumps by exactly `units`:
/// sum_{j >= units} lambda_j C(j, units) p_i^units (1 - p_i)^(j - units).
double type2_component_rates(const RateVector& rates, const SplitSpec& spec, std::size_t i,
                             std::size_t units);

/// The full profile of component i (entries units = 1..k). Throws when p_i = 0.
RateVector type2_component_rate_vector(const RateVector& rates, const SplitSpec& spec, std::size_t i);

/// Each event of size j gets an allocation (j_1..j_q) from j categorical draws
/// on lane 2 of `seed`; component i receives a size-j_i event at the same
/// time whenever j_i > 0.
std::vector<SamplePath> type2_split_path(const SamplePath& path, const SplitSpec& spec, SeedSpec seed);

/// exp(sum_j lambda_j t ((sum_i p_i u_i)^j - 1)), |u_i| <= 1.
double type2_joint_pgf(const RateVector& rates, const SplitSpec& spec, std::span<const double> u, double t);

/// t p_x p_y sum_j lambda_j j (j - 1), for x != y.
double type2_covariance(const RateVector& rates, const SplitSpec& spec, std::size_t x, std::size_t y,
                        double t);

struct OdeResidualReport {
    double max_residual = 0.0;
    /// p(0, 0) = 1 and p(n, 0) = 0 hold exactly.
    bool initial_condition_exact = false;
};

/// Checks the forward equation of component i's marginal state
/// probabilities, with right side built from the per-flip transition rates,
/// against a finite difference in t, for n = 0..n_max.
OdeResidualReport type2_marginal_ode_residual(const RateVector& rates, const SplitSpec& spec, std::size_t i,
                                              std::size_t n_max, double t, double dt);

struct SplitSamples {
    /// counts[i][r]: component i+1 total at t in replication r.
    std::vector<std::vector<long long>> counts;
    /// jumps[i][u-1][r]: number of size-u jumps of component i+1 in replication r.
    std::vector<std::vector<std::vector<long long>>> jumps;
    /// Replications whose split paths fail to reconstruct the input (must be 0).
    std::size_t reconstruction_failures = 0;
};

/// Simulates and splits `replications` paths on (0, t]; type is 1 or 2.
SplitSamples simulate_split(const RateVector& rates, const SplitSpec& spec, int type, double t,
                            std::uint64_t master_seed, std::size_t replications);

}  // namespace gcp
