#include "gcp/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gcp {
namespace {

void require_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(who) + ": t must be finite and non-negative");
    }
}

// Fills x[pos..k-1] for the remaining weight, ascending in each coordinate so
// the output is lexicographic.
void extend_partition(std::size_t k, std::size_t pos, std::size_t remaining, PartitionIndex& x,
                      std::vector<PartitionIndex>& out) {
    const std::size_t weight = pos + 1;
    if (pos + 1 == k) {
        if (remaining % weight == 0) {
            x[pos] = static_cast<std::uint32_t>(remaining / weight);
            out.push_back(x);
        }
        return;
    }
    for (std::size_t m = 0; m * weight <= remaining; ++m) {
        x[pos] = static_cast<std::uint32_t>(m);
        extend_partition(k, pos + 1, remaining - m * weight, x, out);
    }
    x[pos] = 0;
}

constexpr double kLogSpaceThreshold = 50.0;

}  // namespace

std::vector<PartitionIndex> enumerate_partitions(std::size_t k, std::size_t n) {
    if (k == 0) throw std::invalid_argument("enumerate_partitions: k must be at least 1");
    std::vector<PartitionIndex> out;
    PartitionIndex x(k, 0);
    extend_partition(k, 0, n, x, out);
    return out;
}

double pmf_enumerated(const RateVector& rates, long long n, double t) {
    require_time(t, "pmf_enumerated");
    if (n < 0) throw std::invalid_argument("pmf_enumerated: n must be non-negative");
    const std::size_t k = rates.k();
    double sum = 0.0;
    for (const auto& x : enumerate_partitions(k, static_cast<std::size_t>(n))) {
        double log_term = 0.0;
        bool vanishes = false;
        for (std::size_t j = 0; j < k; ++j) {
            const double mu = rates.rates()[j] * t;
            if (x[j] == 0) {
                log_term -= mu;
                continue;
            }
            if (mu == 0.0) {
                vanishes = true;
                break;
            }
            log_term += x[j] * std::log(mu) - mu - std::lgamma(x[j] + 1.0);
        }
        if (!vanishes) sum += std::exp(log_term);
    }
    return std::min(sum, 1.0);
}

std::vector<double> pmf_recurrence(const RateVector& rates, std::size_t n_max, double t) {
    require_time(t, "pmf_recurrence");
    const auto lambda = rates.rates();
    const std::size_t k = lambda.size();
    const double lt = rates.total() * t;
    std::vector<double> p(n_max + 1, 0.0);

    if (lt <= kLogSpaceThreshold) {
        p[0] = std::exp(-lt);
        for (std::size_t n = 1; n <= n_max; ++n) {
            double acc = 0.0;
            for (std::size_t j = 1; j <= std::min(k, n); ++j) {
                acc += static_cast<double>(j) * lambda[j - 1] * p[n - j];
            }
            p[n] = std::clamp(t * acc / static_cast<double>(n), 0.0, 1.0);
        }
        return p;
    }

    // Large Lambda t: e^{-Lambda t} may underflow, so carry log p(n).
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> logp(n_max + 1, neg_inf);
    std::vector<double> log_weight(k, neg_inf);
    for (std::size_t j = 1; j <= k; ++j) {
        if (lambda[j - 1] > 0.0) log_weight[j - 1] = std::log(static_cast<double>(j) * lambda[j - 1]);
    }
    const double log_t = std::log(t);
    logp[0] = -lt;
    std::vector<double> terms;
    terms.reserve(k);
    for (std::size_t n = 1; n <= n_max; ++n) {
        terms.clear();
        double peak = neg_inf;
        for (std::size_t j = 1; j <= std::min(k, n); ++j) {
            const double v = log_weight[j - 1] + logp[n - j];
            if (v == neg_inf) continue;
            terms.push_back(v);
            peak = std::max(peak, v);
        }
        if (terms.empty()) continue;
        double acc = 0.0;
        for (double v : terms) acc += std::exp(v - peak);
        logp[n] = log_t - std::log(static_cast<double>(n)) + peak + std::log(acc);
    }
    for (std::size_t n = 0; n <= n_max; ++n) p[n] = std::min(std::exp(logp[n]), 1.0);
    return p;
}

double pgf(const RateVector& rates, double u, double t) {
    require_time(t, "pgf");
    if (!(std::abs(u) <= 1.0)) throw std::invalid_argument("pgf: |u| must not exceed 1");
    double exponent = 0.0;
    double power = 1.0;
    for (double lambda : rates.rates()) {
        power *= u;
        exponent -= lambda * (1.0 - power);
    }
    return std::exp(exponent * t);
}

double mean(const RateVector& rates, double t) {
    require_time(t, "mean");
    double s = 0.0;
    for (std::size_t j = 1; j <= rates.k(); ++j) s += static_cast<double>(j) * rates.rate(j);
    return s * t;
}

double variance(const RateVector& rates, double t) {
    require_time(t, "variance");
    double s = 0.0;
    for (std::size_t j = 1; j <= rates.k(); ++j) {
        s += static_cast<double>(j * j) * rates.rate(j);
    }
    return s * t;
}

double upper_tail_bound(const RateVector& rates, double t, std::size_t n) {
    require_time(t, "upper_tail_bound");
    if (n == 0) return 1.0;
    if (t == 0.0) return 0.0;
    const auto lambda = rates.rates();
    const double target = static_cast<double>(n);
    if (mean(rates, t) >= target) return 1.0;

    auto slope = [&](double theta) {
        double s = 0.0;
        for (std::size_t j = 1; j <= lambda.size(); ++j) {
            s += static_cast<double>(j) * lambda[j - 1] * t * std::exp(theta * static_cast<double>(j));
        }
        return s - target;
    };
    // The log-bound is convex in theta; its minimiser is the root of slope().
    double lo = 0.0;
    double hi = 1.0;
    while (slope(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    const double theta = 0.5 * (lo + hi);
    double log_bound = -theta * target;
    for (std::size_t j = 1; j <= lambda.size(); ++j) {
        log_bound += lambda[j - 1] * t * std::expm1(theta * static_cast<double>(j));
    }
    return std::min(1.0, std::exp(log_bound));
}

std::size_t truncation_point(const RateVector& rates, double t, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("truncation_point: eps must be positive");
    require_time(t, "truncation_point");
    if (t == 0.0) return 0;
    auto ok = [&](std::size_t n) { return upper_tail_bound(rates, t, n + 1) < eps; };
    std::size_t lo = static_cast<std::size_t>(mean(rates, t));
    if (ok(lo)) return lo;
    std::size_t hi = std::max<std::size_t>(2 * lo, lo + 8);
    while (!ok(hi)) {
        lo = hi;
        hi *= 2;
    }
    // Invariant: !ok(lo), ok(hi).
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace gcp
