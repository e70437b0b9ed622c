#pragma once

// Scenario configuration: an INI file with sections
//   [general]  seed, t, paths, replications
//   [rates]    <name> = comma-separated rates (one line per named profile)
//   [merge]    components = comma-separated names, source, b
//   [split]    rates = name, p = probabilities, type = 1|2, caps = per-component maxima
// Unknown sections and keys are rejected.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcp/rate_vector.hpp"
#include "gcp/superpose.hpp"
#include "gcp/thinning.hpp"

namespace gcp {

struct ScenarioConfig {
    std::uint64_t seed = 42;
    double t = 1.0;
    std::size_t paths = 1;
    std::size_t replications = 100000;

    /// Named profiles in file order.
    std::vector<std::pair<std::string, RateVector>> rates;

    std::vector<std::string> components;
    std::size_t source = 1;
    std::optional<long long> b;

    std::optional<std::string> split_rates;
    std::optional<SplitSpec> split;
    int split_type = 1;
    std::vector<std::size_t> caps;

    /// Throws std::invalid_argument for an unknown name.
    const RateVector& named(const std::string& name) const;
    /// The [merge] components in order; all named profiles when none are listed.
    MergeFamily family() const;
    /// Profile named by [split] rates, or the only profile when exactly one exists.
    const RateVector& split_profile() const;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

}  // namespace gcp
