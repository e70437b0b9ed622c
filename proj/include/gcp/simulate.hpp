#pragma once

// Event-driven sampling of GCP paths: a Poisson clock of total rate Lambda
// whose events carry an independent size mark j with probability lambda_j / Lambda.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gcp/random.hpp"
#include "gcp/rate_vector.hpp"
#include "gcp/stats.hpp"

namespace gcp {

struct Event {
    double time = 0.0;
    std::uint32_t size = 0;

    friend bool operator==(const Event&, const Event&) = default;
};

/// A realised trajectory on (0, horizon]. Times strictly increase.
class SamplePath {
public:
    SamplePath(double horizon, std::size_t k, std::vector<Event> events = {});

    double horizon() const noexcept { return horizon_; }
    std::size_t k() const noexcept { return k_; }
    const std::vector<Event>& events() const noexcept { return events_; }

    friend bool operator==(const SamplePath&, const SamplePath&) = default;

private:
    double horizon_;
    std::size_t k_;
    std::vector<Event> events_;
};

SamplePath sample_path(const RateVector& rates, double horizon, SeedSpec seed);
/// Draws from an existing substream, e.g. a non-default lane.
SamplePath sample_path(const RateVector& rates, double horizon, StreamRng& rng);

/// Paths for stream ids 0..count-1 under one master seed, generated in parallel.
std::vector<SamplePath> sample_paths(const RateVector& rates, double horizon,
                                     std::uint64_t master_seed, std::size_t count);

/// Event-time union of paths sharing a horizon; sizes of events at identical
/// times are summed into one event.
SamplePath superpose_paths(const std::vector<SamplePath>& paths);

/// Sum of sizes of events with time <= t.
long long count_at(const SamplePath& path, double t);

/// Counts over (grid[i], grid[i+1]] for ascending grid points in [0, horizon].
std::vector<long long> increments(const SamplePath& path, const std::vector<double>& grid);

/// Histogram of count_at(path, t) over paths.
EmpiricalDistribution empirical_distribution(const std::vector<SamplePath>& paths, double t);

/// Line format: "horizon=<real> k=<int>" then one "time,size" line per event.
void write_path(std::ostream& out, const SamplePath& path);
std::string serialize_path(const SamplePath& path);
/// Reads every path in the stream (each introduced by its header line).
std::vector<SamplePath> read_paths(std::istream& in);

/// Runs body(i) for i in [0, count) across hardware threads. Callers write
/// results into slot i only, so the outcome is schedule independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gcp
