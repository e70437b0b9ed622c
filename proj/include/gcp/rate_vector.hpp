#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gcp {

/// Jump-rate profile of a generalized counting process: entry j-1 holds the
/// rate of size-j jumps. Trailing zeros are allowed so that a profile embeds
/// into any larger maximum amplitude.
class RateVector {
public:
    /// Throws std::invalid_argument naming the violated invariant.
    explicit RateVector(std::vector<double> rates);
    RateVector(std::initializer_list<double> rates);

    /// Parses a comma-separated list such as "1,2,0.5".
    static RateVector parse(const std::string& text);

    std::size_t k() const noexcept { return rates_.size(); }
    /// Rate of size-j jumps, 1-based; zero for j > k().
    double rate(std::size_t j) const noexcept;
    double total() const noexcept { return total_; }
    std::span<const double> rates() const noexcept { return rates_; }

    /// Same rates, zero-padded up to `k` (k must be >= this->k()).
    RateVector padded(std::size_t k) const;

    std::string to_string() const;

    friend bool operator==(const RateVector&, const RateVector&) = default;

private:
    std::vector<double> rates_;
    double total_ = 0.0;
};

}  // namespace gcp
