#include "gcp/splitting.hpp"

#include <cmath>
#include <stdexcept>

#include "gcp/counting.hpp"
#include "gcp/stats.hpp"

namespace gcp {
namespace {

double choose(std::size_t n, std::size_t r) {
    if (r > n) return 0.0;
    r = std::min(r, n - r);
    double c = 1.0;
    for (std::size_t i = 1; i <= r; ++i) c = c * static_cast<double>(n - r + i) / static_cast<double>(i);
    return c;
}

// Pr{exactly `units` of j flips land on a face of probability p}.
double binomial_mass(std::size_t j, std::size_t units, double p) {
    return choose(j, units) * std::pow(p, static_cast<double>(units)) *
           std::pow(1.0 - p, static_cast<double>(j - units));
}

}  // namespace

double type2_component_rates(const RateVector& rates, const SplitSpec& spec, std::size_t i,
                             std::size_t units) {
    const double pi = spec.p(i);
    if (units == 0 || units > rates.k()) {
        throw std::out_of_range("type2_component_rates: jump size outside 1..k");
    }
    double r = 0.0;
    for (std::size_t j = units; j <= rates.k(); ++j) r += rates.rate(j) * binomial_mass(j, units, pi);
    return r;
}

RateVector type2_component_rate_vector(const RateVector& rates, const SplitSpec& spec, std::size_t i) {
    if (spec.p(i) == 0.0) {
        throw std::invalid_argument("type2_component_rate_vector: component " + std::to_string(i) +
                                    " has routing probability 0");
    }
    std::vector<double> out(rates.k());
    for (std::size_t u = 1; u <= rates.k(); ++u) out[u - 1] = type2_component_rates(rates, spec, i, u);
    return RateVector(std::move(out));
}

std::vector<SamplePath> type2_split_path(const SamplePath& path, const SplitSpec& spec, SeedSpec seed) {
    StreamRng rng(seed, 2);
    std::vector<std::vector<Event>> routed(spec.q());
    std::vector<std::uint32_t> allocation(spec.q());
    for (const auto& e : path.events()) {
        std::fill(allocation.begin(), allocation.end(), 0u);
        for (std::uint32_t unit = 0; unit < e.size; ++unit) {
            ++allocation[rng.categorical(spec.probabilities(), 1.0)];
        }
        for (std::size_t i = 0; i < spec.q(); ++i) {
            if (allocation[i] > 0) routed[i].push_back({e.time, allocation[i]});
        }
    }
    std::vector<SamplePath> out;
    out.reserve(spec.q());
    for (auto& events : routed) out.emplace_back(path.horizon(), path.k(), std::move(events));
    return out;
}

double type2_joint_pgf(const RateVector& rates, const SplitSpec& spec, std::span<const double> u, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("type2_joint_pgf: t must be non-negative");
    if (u.size() != spec.q()) throw std::invalid_argument("type2_joint_pgf: need one argument per component");
    double mixed = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(std::abs(u[i]) <= 1.0)) throw std::invalid_argument("type2_joint_pgf: arguments must lie in [-1, 1]");
        mixed += spec.probabilities()[i] * u[i];
    }
    double exponent = 0.0;
    double power = 1.0;
    for (double lambda : rates.rates()) {
        power *= mixed;
        exponent += lambda * (power - 1.0);
    }
    return std::exp(exponent * t);
}

double type2_covariance(const RateVector& rates, const SplitSpec& spec, std::size_t x, std::size_t y,
                        double t) {
    if (x == y) throw std::invalid_argument("type2_covariance: components must differ");
    if (!(t >= 0.0)) throw std::invalid_argument("type2_covariance: t must be non-negative");
    double factorial_moment = 0.0;
    for (std::size_t j = 2; j <= rates.k(); ++j) {
        factorial_moment += rates.rate(j) * static_cast<double>(j * (j - 1));
    }
    return t * spec.p(x) * spec.p(y) * factorial_moment;
}

OdeResidualReport type2_marginal_ode_residual(const RateVector& rates, const SplitSpec& spec, std::size_t i,
                                              std::size_t n_max, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("type2_marginal_ode_residual: dt must be positive");
    const RateVector component = type2_component_rate_vector(rates, spec, i);
    const double p = spec.p(i);
    const std::size_t k = rates.k();

    // Leaving rate: a size-j packet moves component i unless all j flips miss it.
    double leave = 0.0;
    for (std::size_t j = 1; j <= k; ++j) leave += rates.rate(j) * (1.0 - std::pow(1.0 - p, static_cast<double>(j)));

    auto state = [&](double s) { return pmf_recurrence(component, n_max, s); };
    auto rhs = [&](double s) {
        const auto pn = state(s);
        std::vector<double> out(n_max + 1);
        for (std::size_t n = 0; n <= n_max; ++n) {
            double r = -leave * pn[n];
            for (std::size_t j = 1; j <= k; ++j) {
                for (std::size_t units = 1; units <= std::min(j, n); ++units) {
                    r += rates.rate(j) * binomial_mass(j, units, p) * pn[n - units];
                }
            }
            out[n] = r;
        }
        return out;
    };
    OdeResidualReport report;
    const double grid[] = {t};
    report.max_residual = ode_residual(state, rhs, grid, dt);
    const auto initial = state(0.0);
    report.initial_condition_exact = initial[0] == 1.0;
    for (std::size_t n = 1; n <= n_max; ++n) report.initial_condition_exact &= initial[n] == 0.0;
    return report;
}

SplitSamples simulate_split(const RateVector& rates, const SplitSpec& spec, int type, double t,
                            std::uint64_t master_seed, std::size_t replications) {
    if (type != 1 && type != 2) throw std::invalid_argument("simulate_split: type must be 1 or 2");
    const std::size_t q = spec.q();
    const std::size_t k = rates.k();
    SplitSamples out;
    out.counts.assign(q, std::vector<long long>(replications, 0));
    out.jumps.assign(q, std::vector<std::vector<long long>>(k, std::vector<long long>(replications, 0)));
    std::vector<char> rebuilt(replications, 1);
    parallel_for(replications, [&](std::size_t r) {
        const SeedSpec seed{master_seed, r};
        const SamplePath path = sample_path(rates, t, seed);
        const auto parts = type == 1 ? type1_thin_path(path, spec, seed) : type2_split_path(path, spec, seed);
        for (std::size_t i = 0; i < q; ++i) {
            out.counts[i][r] = count_at(parts[i], t);
            for (const auto& e : parts[i].events()) ++out.jumps[i][e.size - 1][r];
        }
        rebuilt[r] = superpose_paths(parts) == path;
    });
    for (char ok : rebuilt) out.reconstruction_failures += ok ? 0 : 1;
    return out;
}

}  // namespace gcp
