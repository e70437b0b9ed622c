#pragma once

// Superposition of independent generalized counting processes.

#include <cstddef>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "gcp/rate_vector.hpp"

namespace gcp {

/// Ordered family of independent components. Rates beyond a component's own
/// k are treated as zero.
class MergeFamily {
public:
    explicit MergeFamily(std::vector<RateVector> components);

    std::size_t size() const noexcept { return components_.size(); }
    std::size_t k_max() const noexcept { return k_max_; }
    const RateVector& component(std::size_t s) const;  // 1-based
    const std::vector<RateVector>& components() const noexcept { return components_; }

private:
    std::vector<RateVector> components_;
    std::size_t k_max_ = 0;
};

/// beta_j = sum_i lambda_j^(i), j = 1..k_max.
RateVector merge(const MergeFamily& family);

/// (pmf of merge(family) at n, convolution of the component pmfs at n).
std::pair<double, double> merged_pmf_check(const MergeFamily& family, long long n, double t);

/// Pr{a registered size-j packet came from component `source`} (both 1-based).
/// Throws std::domain_error when no component produces size-j packets.
double origin_probability(const MergeFamily& family, std::size_t source, std::size_t j);

/// A countably infinite family with a caller-supplied convergence certificate.
struct CountableFamily {
    /// Fixed maximum amplitude; generated components with larger k are rejected.
    std::size_t k_max = 1;
    /// i-th component, i >= 1.
    std::function<RateVector(std::size_t i)> component;
    /// Upper bound on sum_{i > n} lambda_j^(i); non-increasing in n.
    std::function<double(std::size_t j, std::size_t n)> tail_bound;
    /// Declared divergence of sum_i lambda_j^(i); absent means none diverge.
    std::function<bool(std::size_t j)> diverges;
};

struct Divergent {
    std::size_t j = 0;  // first amplitude whose rate series diverges
};

struct NotCertified {
    std::size_t terms_tried = 0;
};

using CountableMergeResult = std::variant<RateVector, Divergent, NotCertified>;

/// Sums the rate series with absolute error below tol per amplitude.
CountableMergeResult merge_countable(const CountableFamily& family, double tol,
                                     std::size_t max_terms = std::size_t{1} << 26);

}  // namespace gcp
