#pragma once

// Type I splitting: every whole packet of a GCP is routed to one of q
// components by an independent categorical draw.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gcp/random.hpp"
#include "gcp/rate_vector.hpp"
#include "gcp/simulate.hpp"

namespace gcp {

/// Routing probabilities p_1..p_q: non-negative, summing to 1 within 1e-12.
class SplitSpec {
public:
    explicit SplitSpec(std::vector<double> p);
    static SplitSpec parse(const std::string& text);

    std::size_t q() const noexcept { return p_.size(); }
    double p(std::size_t i) const;  // 1-based
    const std::vector<double>& probabilities() const noexcept { return p_; }

private:
    std::vector<double> p_;
};

using SplitSpecI = SplitSpec;

/// lambda_j p_i, j = 1..k. Throws std::invalid_argument when p_i = 0.
RateVector type1_component_rates(const RateVector& rates, const SplitSpec& spec, std::size_t i);

/// Routes each event of `path` to one component with one categorical draw
/// from the substream of `seed` (lane 1).
std::vector<SamplePath> type1_thin_path(const SamplePath& path, const SplitSpec& spec, SeedSpec seed);

struct IndependenceReport {
    std::size_t replications = 0;
    double t = 0.0;
    /// Component counts at t, [component][replication].
    std::vector<std::vector<long long>> counts;
    /// Sample covariance of components 1 and 2 with jackknife error.
    double covariance = 0.0;
    double covariance_se = 0.0;
    /// Pearson independence test on the (component 1, component 2) table.
    double chi_square = 0.0;
    std::size_t chi_square_dof = 0;
    double chi_square_p_value = 1.0;
    /// Events dropped or duplicated by thinning, over all replications (must be 0).
    std::size_t conservation_violations = 0;
};

/// Simulates `replications` paths of `rates` on (0, t], thins each, and
/// reports dependence statistics between components 1 and 2. Requires q >= 2.
IndependenceReport type1_independence_check(const RateVector& rates, const SplitSpec& spec, double t,
                                            std::size_t replications, std::uint64_t master_seed);

}  // namespace gcp
