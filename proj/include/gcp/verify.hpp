#pragma once

// Deterministic verification suites: every analytic identity of the toolkit
// checked against enumeration or Monte Carlo, one record per check.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gcp/stats.hpp"

namespace gcp {

struct VerifyOptions {
    std::uint64_t seed = 42;
    /// Monte Carlo replications per check.
    std::size_t replications = 100000;
};

VerificationReport verify_core(const VerifyOptions& options);
VerificationReport verify_simulate(const VerifyOptions& options);
VerificationReport verify_merge(const VerifyOptions& options);
VerificationReport verify_packets(const VerifyOptions& options);
VerificationReport verify_split(const VerifyOptions& options);

/// Names accepted by run_suite, "all" last.
const std::vector<std::string>& suite_names();

/// Runs one named suite, or every suite in order for "all".
/// Throws std::invalid_argument for an unknown name.
VerificationReport run_suite(std::string_view suite, const VerifyOptions& options);

/// (estimate - target) / se, 0 when the estimate hits the target exactly and
/// infinite when se vanishes otherwise.
double z_score(double estimate, double target, double se);

}  // namespace gcp
