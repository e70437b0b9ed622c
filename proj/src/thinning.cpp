#include "gcp/thinning.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gcp/stats.hpp"

namespace gcp {

SplitSpec::SplitSpec(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("SplitSpec: q must be at least 1");
    double sum = 0.0;
    for (double v : p_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("SplitSpec: routing probabilities must be non-negative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("SplitSpec: routing probabilities must sum to 1");
    }
}

SplitSpec SplitSpec::parse(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        try {
            values.push_back(std::stod(item, &used));
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw std::invalid_argument("SplitSpec: cannot parse probability '" + item + "'");
        }
    }
    return SplitSpec(std::move(values));
}

double SplitSpec::p(std::size_t i) const {
    if (i == 0 || i > p_.size()) throw std::out_of_range("SplitSpec: component index outside 1..q");
    return p_[i - 1];
}

RateVector type1_component_rates(const RateVector& rates, const SplitSpec& spec, std::size_t i) {
    const double pi = spec.p(i);
    if (pi == 0.0) {
        throw std::invalid_argument("type1_component_rates: component " + std::to_string(i) +
                                    " has routing probability 0");
    }
    std::vector<double> out(rates.rates().begin(), rates.rates().end());
    for (double& r : out) r *= pi;
    return RateVector(std::move(out));
}

std::vector<SamplePath> type1_thin_path(const SamplePath& path, const SplitSpec& spec, SeedSpec seed) {
    StreamRng rng(seed, 1);
    std::vector<std::vector<Event>> routed(spec.q());
    for (const auto& e : path.events()) {
        routed[rng.categorical(spec.probabilities(), 1.0)].push_back(e);
    }
    std::vector<SamplePath> out;
    out.reserve(spec.q());
    for (auto& events : routed) out.emplace_back(path.horizon(), path.k(), std::move(events));
    return out;
}

IndependenceReport type1_independence_check(const RateVector& rates, const SplitSpec& spec, double t,
                                            std::size_t replications, std::uint64_t master_seed) {
    if (spec.q() < 2) throw std::invalid_argument("type1_independence_check: needs q >= 2");
    if (replications < 10000) {
        throw std::invalid_argument("type1_independence_check: needs at least 10^4 replications");
    }
    IndependenceReport report;
    report.replications = replications;
    report.t = t;
    report.counts.assign(spec.q(), std::vector<long long>(replications, 0));
    std::vector<char> conserved(replications, 1);
    parallel_for(replications, [&](std::size_t r) {
        const SeedSpec seed{master_seed, r};
        const SamplePath path = sample_path(rates, t, seed);
        const auto parts = type1_thin_path(path, spec, seed);
        for (std::size_t i = 0; i < parts.size(); ++i) report.counts[i][r] = count_at(parts[i], t);
        conserved[r] = superpose_paths(parts) == path;
    });
    for (char ok : conserved) report.conservation_violations += ok ? 0 : 1;

    std::vector<double> x(report.counts[0].begin(), report.counts[0].end());
    std::vector<double> y(report.counts[1].begin(), report.counts[1].end());
    const auto m = moment_estimates(x, y);
    report.covariance = m.covariance;
    report.covariance_se = m.se_covariance;
    const auto chi = chi_square_independence(report.counts[0], report.counts[1]);
    report.chi_square = chi.statistic;
    report.chi_square_dof = chi.dof;
    report.chi_square_p_value = chi.p_value;
    return report;
}

}  // namespace gcp
