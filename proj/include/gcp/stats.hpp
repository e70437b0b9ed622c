#pragma once

// Statistical comparison utilities shared by the verification checks.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gcp {

class EmpiricalDistribution {
public:
    /// Throws if samples is empty or contains negative values.
    static EmpiricalDistribution from_samples(std::span<const long long> samples);

    std::uint64_t n() const noexcept { return n_; }
    const std::map<long long, std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t count(long long value) const;
    double frequency(long long value) const;

private:
    std::map<long long, std::uint64_t> counts_;
    std::uint64_t n_ = 0;
};

/// 1/2 sum_{n <= n_max} |f(n) - p(n)| + 1/2 (empirical mass above n_max +
/// analytic mass above n_max), where pmf holds p(0..n_max). This bounds the
/// total variation distance from above and equals it when both tails vanish.
double tv_distance(const EmpiricalDistribution& emp, std::span<const double> pmf);

/// 1/2 sum |a(n) - b(n)| over a common support (shorter input zero-padded).
double tv_distance(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Goodness of fit of emp against pmf over 0..pmf.size()-1, last bin open
/// ended. Adjacent bins are pooled left to right until each expected count is
/// at least min_expected. Throws std::runtime_error with fewer than 2 bins.
ChiSquareResult chi_square_gof(const EmpiricalDistribution& emp, std::span<const double> pmf,
                               double min_expected = 5.0);

/// Pearson independence test on the contingency table of paired samples.
/// Upper tails of each margin are merged until every expected cell count
/// reaches min_expected.
ChiSquareResult chi_square_independence(std::span<const long long> x, std::span<const long long> y,
                                        double min_expected = 5.0);

struct MomentEstimates {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double se_mean = 0.0;   // jackknife
    double se_variance = 0.0;
    std::size_t n = 0;
};

struct BivariateMoments {
    MomentEstimates x;
    MomentEstimates y;
    double covariance = 0.0;  // unbiased
    double se_covariance = 0.0;
    double correlation = 0.0;
    double se_correlation = 0.0;
};

/// Requires at least 2 samples; jackknife errors of second moments need 3.
MomentEstimates moment_estimates(std::span<const double> samples);
BivariateMoments moment_estimates(std::span<const double> x, std::span<const double> y);

/// max over grid of |(f(t + dt) - f(t - dt)) / 2dt - rhs(t)| over all state
/// components. Points with t < dt use the one-sided second-order difference.
double ode_residual(const std::function<std::vector<double>(double)>& state,
                    const std::function<std::vector<double>(double)>& rhs,
                    std::span<const double> grid, double dt);

/// One verification record.
struct CheckRecord {
    std::string name;
    double statistic = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    bool pass = false;

    static CheckRecord within(std::string name, double statistic, double lo, double hi);
};

class VerificationReport {
public:
    void add(CheckRecord record) { records_.push_back(std::move(record)); }
    void append(const VerificationReport& other);
    const std::vector<CheckRecord>& records() const noexcept { return records_; }
    bool all_passed() const noexcept;

    /// One line per record: name=<..> statistic=<..> band=[lo,hi] pass=<true|false>
    std::string to_text() const;
    /// One JSON object per line, one line per record.
    std::string to_json() const;

private:
    std::vector<CheckRecord> records_;
};

}  // namespace gcp
