#include "gcp/superpose.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gcp/counting.hpp"

namespace gcp {

MergeFamily::MergeFamily(std::vector<RateVector> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw std::invalid_argument("MergeFamily: at least one component is required");
    }
    for (const auto& c : components_) k_max_ = std::max(k_max_, c.k());
}

const RateVector& MergeFamily::component(std::size_t s) const {
    if (s == 0 || s > components_.size()) {
        throw std::out_of_range("MergeFamily: component index " + std::to_string(s) +
                                " outside 1.." + std::to_string(components_.size()));
    }
    return components_[s - 1];
}

RateVector merge(const MergeFamily& family) {
    std::vector<double> beta(family.k_max(), 0.0);
    for (const auto& c : family.components()) {
        for (std::size_t j = 1; j <= c.k(); ++j) beta[j - 1] += c.rate(j);
    }
    return RateVector(std::move(beta));
}

std::pair<double, double> merged_pmf_check(const MergeFamily& family, long long n, double t) {
    if (n < 0) throw std::invalid_argument("merged_pmf_check: n must be non-negative");
    const auto n_max = static_cast<std::size_t>(n);
    const double merged = pmf_recurrence(merge(family), n_max, t)[n_max];

    std::vector<double> conv = pmf_recurrence(family.components().front(), n_max, t);
    for (std::size_t s = 1; s < family.size(); ++s) {
        const auto next = pmf_recurrence(family.components()[s], n_max, t);
        std::vector<double> out(n_max + 1, 0.0);
        for (std::size_t m = 0; m <= n_max; ++m) {
            for (std::size_t l = 0; l <= m; ++l) out[m] += conv[l] * next[m - l];
        }
        conv = std::move(out);
    }
    return {merged, conv[n_max]};
}

double origin_probability(const MergeFamily& family, std::size_t source, std::size_t j) {
    const RateVector& from = family.component(source);
    if (j == 0 || j > family.k_max()) {
        throw std::out_of_range("origin_probability: jump size " + std::to_string(j) +
                                " outside 1.." + std::to_string(family.k_max()));
    }
    double total = 0.0;
    for (const auto& c : family.components()) total += c.rate(j);
    if (total == 0.0) {
        throw std::domain_error("origin_probability: no component produces size-" +
                                std::to_string(j) + " packets");
    }
    return from.rate(j) / total;
}

CountableMergeResult merge_countable(const CountableFamily& family, double tol,
                                     std::size_t max_terms) {
    if (!(tol > 0.0)) throw std::invalid_argument("merge_countable: tol must be positive");
    if (family.k_max == 0 || !family.component || !family.tail_bound) {
        throw std::invalid_argument("merge_countable: family needs k_max, component and tail_bound");
    }
    const std::size_t k = family.k_max;
    if (family.diverges) {
        for (std::size_t j = 1; j <= k; ++j) {
            if (family.diverges(j)) return Divergent{j};
        }
    }

    // Smallest power-of-two term count whose certified tail is below tol / 2
    // for every amplitude; the remaining tol / 2 covers summation error.
    auto certified = [&](std::size_t n) {
        for (std::size_t j = 1; j <= k; ++j) {
            if (!(family.tail_bound(j, n) < 0.5 * tol)) return false;
        }
        return true;
    };
    std::size_t terms = 1;
    while (!certified(terms)) {
        if (terms >= max_terms) return NotCertified{terms};
        terms = std::min(terms * 2, max_terms);
    }

    // Neumaier-compensated partial sums.
    std::vector<double> sum(k, 0.0);
    std::vector<double> comp(k, 0.0);
    for (std::size_t i = 1; i <= terms; ++i) {
        const RateVector c = family.component(i);
        if (c.k() > k) {
            throw std::invalid_argument("merge_countable: component " + std::to_string(i) +
                                        " exceeds the family's maximum amplitude");
        }
        for (std::size_t j = 1; j <= c.k(); ++j) {
            const double x = c.rate(j);
            const double s = sum[j - 1] + x;
            comp[j - 1] += std::abs(sum[j - 1]) >= std::abs(x) ? (sum[j - 1] - s) + x
                                                               : (x - s) + sum[j - 1];
            sum[j - 1] = s;
        }
    }
    for (std::size_t j = 0; j < k; ++j) sum[j] += comp[j];
    return RateVector(std::move(sum));
}

}  // namespace gcp
