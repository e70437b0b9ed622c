#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace gcp {

/// Identifies one reproducible random substream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {

// SplitMix64 finaliser (Steele, Lea & Flood); a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator: draw i of a stream is mix64(key + (i+1) * gamma), with
/// the key derived from (master_seed, stream_id, lane). Distinct lanes of the
/// same SeedSpec give separate substreams for separate purposes (path
/// generation, routing, ...). No state is shared, so results do not depend
/// on which thread evaluates which stream.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit StreamRng(SeedSpec seed, std::uint64_t lane = 0) noexcept
        : key_(detail::mix64(detail::mix64(detail::mix64(seed.master_seed) ^ seed.stream_id) +
                             lane * 0xD1B54A32D192ED03ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        counter_ += kGamma;
        return detail::mix64(key_ + counter_);
    }

    /// Uniform on (0, 1].
    double uniform() noexcept {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

    /// Index i with probability weights[i] / sum(weights), by inverse CDF.
    std::size_t categorical(std::span<const double> weights, double total) noexcept {
        const double target = uniform() * total;
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            last_positive = i;
            acc += weights[i];
            if (target <= acc) return i;
        }
        return last_positive;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace gcp
