#include "gcp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <variant>

#include "gcp/counting.hpp"
#include "gcp/packets.hpp"
#include "gcp/random.hpp"
#include "gcp/simulate.hpp"
#include "gcp/splitting.hpp"
#include "gcp/superpose.hpp"
#include "gcp/thinning.hpp"

namespace gcp {
namespace {

constexpr double kBand = 4.0;  // standard errors

std::vector<double> as_doubles(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

double poisson_pmf(double mu, long long n) {
    return std::exp(static_cast<double>(n) * std::log(mu) - mu - std::lgamma(static_cast<double>(n) + 1.0));
}

// Rates drawn in (0, 2] from a lane reserved for verification inputs.
RateVector random_rates(StreamRng& rng, std::size_t k) {
    std::vector<double> r(k);
    for (double& v : r) v = 2.0 * rng.uniform();
    return RateVector(std::move(r));
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size(), 0.0);
    for (std::size_t n = 0; n < a.size(); ++n) {
        for (std::size_t m = 0; m <= n; ++m) out[n] += a[m] * b[n - m];
    }
    return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

std::vector<double> component_pmf(const RateVector& rates, double t) {
    return pmf_recurrence(rates, truncation_point(rates, t, 1e-12), t);
}

}  // namespace

double z_score(double estimate, double target, double se) {
    if (estimate == target) return 0.0;
    if (!(se > 0.0)) return std::copysign(std::numeric_limits<double>::infinity(), estimate - target);
    return (estimate - target) / se;
}

VerificationReport verify_core(const VerifyOptions& options) {
    VerificationReport report;

    double poisson_err = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        for (long long n = 0; n <= 50; ++n) {
            poisson_err = std::max(poisson_err, std::abs(pmf_enumerated(RateVector{1.0}, n, t) - poisson_pmf(t, n)));
        }
    }
    report.add(CheckRecord::within("core.poisson_reduction", poisson_err, 0.0, 1e-12));

    StreamRng rng(SeedSpec{options.seed, 0}, 100);
    double oracle_err = 0.0;
    for (std::size_t v = 0; v < 10; ++v) {
        const RateVector rates = random_rates(rng, 1 + v % 5);
        for (double t : {0.1, 1.0, 5.0}) {
            const auto rec = pmf_recurrence(rates, 30, t);
            for (long long n = 0; n <= 30; ++n) {
                oracle_err = std::max(oracle_err, std::abs(rec[n] - pmf_enumerated(rates, n, t)));
            }
        }
    }
    report.add(CheckRecord::within("core.recurrence_vs_enumeration", oracle_err, 0.0, 1e-10));

    const RateVector rates{1.0, 2.0};
    double norm_err = 0.0;
    double pgf_err = 0.0;
    double mean_err = 0.0;
    double var_err = 0.0;
    double deriv_err = 0.0;
    for (double t : {0.5, 1.0, 5.0}) {
        const auto p = pmf_recurrence(rates, truncation_point(rates, t, 1e-12), t);
        double total = 0.0;
        double m1 = 0.0;
        double m2 = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n) {
            total += p[n];
            m1 += static_cast<double>(n) * p[n];
            m2 += static_cast<double>(n * n) * p[n];
        }
        norm_err = std::max(norm_err, std::abs(total - 1.0));
        mean_err = std::max(mean_err, std::abs(m1 - mean(rates, t)) / mean(rates, t));
        var_err = std::max(var_err, std::abs(m2 - m1 * m1 - variance(rates, t)) / variance(rates, t));
        for (double u : {-0.9, -0.3, 0.0, 0.4, 0.95}) {
            double series = 0.0;
            for (std::size_t n = p.size(); n-- > 0;) series = series * u + p[n];
            pgf_err = std::max(pgf_err, std::abs(series - pgf(rates, u, t)));
        }
        const double h = 1e-6;
        // One-sided (u cannot exceed 1), second order in h.
        const double slope = (3.0 * pgf(rates, 1.0, t) - 4.0 * pgf(rates, 1.0 - h, t) + pgf(rates, 1.0 - 2.0 * h, t)) / (2.0 * h);
        deriv_err = std::max(deriv_err, std::abs(slope - mean(rates, t)) / mean(rates, t));
    }
    report.add(CheckRecord::within("core.normalization", norm_err, 0.0, 1e-9));
    report.add(CheckRecord::within("core.pgf_series", pgf_err, 0.0, 1e-10));
    report.add(CheckRecord::within("core.pgf_derivative_mean", deriv_err, 0.0, 1e-5));
    report.add(CheckRecord::within("core.mean_vs_pmf", mean_err, 0.0, 1e-9));
    report.add(CheckRecord::within("core.variance_vs_pmf", var_err, 0.0, 1e-9));
    return report;
}

VerificationReport verify_simulate(const VerifyOptions& options) {
    VerificationReport report;
    const RateVector rates{1.0, 2.0};
    const double t = 1.0;
    const auto paths = sample_paths(rates, 2.0 * t, options.seed, options.replications);

    std::vector<double> at_t(paths.size());
    std::vector<double> first(paths.size());
    std::vector<double> second(paths.size());
    std::vector<long long> second_int(paths.size());
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto inc = increments(paths[r], {0.0, t, 2.0 * t});
        at_t[r] = first[r] = static_cast<double>(inc[0]);
        second[r] = static_cast<double>(inc[1]);
        second_int[r] = inc[1];
    }
    const auto m = moment_estimates(at_t);
    report.add(CheckRecord::within("simulate.mean_z", z_score(m.mean, mean(rates, t), m.se_mean), -kBand, kBand));
    report.add(CheckRecord::within("simulate.variance_z", z_score(m.variance, variance(rates, t), m.se_variance),
                                   -kBand, kBand));

    const auto pmf = component_pmf(rates, t);
    const auto emp = empirical_distribution(paths, t);
    report.add(CheckRecord::within("simulate.tv_distance", tv_distance(emp, pmf), 0.0, 0.01));
    report.add(CheckRecord::within("simulate.gof_p_value", chi_square_gof(emp, pmf).p_value, 1e-4, 1.0));

    const auto inc = moment_estimates(first, second);
    report.add(CheckRecord::within("simulate.increment_correlation_z", z_score(inc.correlation, 0.0, inc.se_correlation),
                                   -kBand, kBand));
    const auto shifted = EmpiricalDistribution::from_samples(second_int);
    report.add(CheckRecord::within("simulate.increment_stationarity_p_value", chi_square_gof(shifted, pmf).p_value,
                                   1e-4, 1.0));
    return report;
}

VerificationReport verify_merge(const VerifyOptions& options) {
    VerificationReport report;
    const RateVector lambda{1.0, 2.0};
    const RateVector mu{3.0, 4.0, 5.0};
    const MergeFamily pair({lambda, mu});

    const RateVector beta = merge(pair);
    report.add(CheckRecord::within("merge.example_rates", max_abs_diff(beta.rates(), std::vector{4.0, 6.0, 5.0}),
                                   0.0, 0.0));

    // Convolution identity on the example pair and random families with q, k <= 3.
    StreamRng rng(SeedSpec{options.seed, 0}, 101);
    std::vector<MergeFamily> families{pair};
    for (std::size_t f = 0; f < 9; ++f) {
        std::vector<RateVector> parts;
        for (std::size_t i = 0; i <= f % 3; ++i) parts.push_back(random_rates(rng, 1 + (f + i) % 3));
        families.emplace_back(std::move(parts));
    }
    double conv_err = 0.0;
    for (const auto& family : families) {
        for (double t : {0.1, 0.7, 2.0}) {
            const auto merged = pmf_recurrence(merge(family), 20, t);
            std::vector<double> conv = pmf_recurrence(family.component(1), 20, t);
            for (std::size_t s = 2; s <= family.size(); ++s) conv = convolve(conv, pmf_recurrence(family.component(s), 20, t));
            conv_err = std::max(conv_err, max_abs_diff(merged, conv));
        }
    }
    report.add(CheckRecord::within("merge.superposition_law", conv_err, 0.0, 1e-10));

    const RateVector nu{0.5};
    const double assoc = max_abs_diff(merge(MergeFamily({merge(pair), nu})).rates(),
                                      merge(MergeFamily({lambda, mu, nu})).rates());
    report.add(CheckRecord::within("merge.associativity", assoc, 0.0, 0.0));
    double mean_gap = std::abs(mean(beta, 1.3) - mean(lambda, 1.3) - mean(mu, 1.3));
    report.add(CheckRecord::within("merge.mean_additivity", mean_gap, 0.0, 1e-12));

    const std::size_t k = 3;
    CountableFamily geometric{k, [k](std::size_t i) { return RateVector(std::vector<double>(k, std::ldexp(1.0, -static_cast<int>(i)))); },
                              [](std::size_t, std::size_t n) { return std::ldexp(1.0, -static_cast<int>(n)); }, {}};
    double geo_err = std::numeric_limits<double>::infinity();
    const auto geo = merge_countable(geometric, 1e-10);
    if (const auto* r = std::get_if<RateVector>(&geo)) {
        geo_err = 0.0;
        for (double b : r->rates()) geo_err = std::max(geo_err, std::abs(b - 1.0));
    }
    report.add(CheckRecord::within("merge.countable_geometric", geo_err, 0.0, 1e-8));

    CountableFamily scaled{k,
                           [k](std::size_t i) {
                               std::vector<double> r(k);
                               for (std::size_t j = 1; j <= k; ++j) r[j - 1] = static_cast<double>(j) * std::pow(3.0, -static_cast<double>(i));
                               return RateVector(std::move(r));
                           },
                           [](std::size_t j, std::size_t n) { return static_cast<double>(j) * std::pow(3.0, -static_cast<double>(n)) / 2.0; },
                           {}};
    double scaled_err = std::numeric_limits<double>::infinity();
    const auto sc = merge_countable(scaled, 1e-10);
    if (const auto* r = std::get_if<RateVector>(&sc)) {
        scaled_err = 0.0;
        for (std::size_t j = 1; j <= k; ++j) scaled_err = std::max(scaled_err, std::abs(r->rate(j) - j / 2.0));
    }
    report.add(CheckRecord::within("merge.countable_scaled_geometric", scaled_err, 0.0, 1e-8));

    CountableFamily harmonic{1, [](std::size_t i) { return RateVector{1.0 / static_cast<double>(i)}; },
                             [](std::size_t, std::size_t) { return std::numeric_limits<double>::infinity(); },
                             [](std::size_t j) { return j == 1; }};
    const bool divergent = std::holds_alternative<Divergent>(merge_countable(harmonic, 1e-10));
    report.add(CheckRecord::within("merge.countable_harmonic_divergent", divergent ? 1.0 : 0.0, 1.0, 1.0));

    const double expected[2][3] = {{0.25, 1.0 / 3.0, 0.0}, {0.75, 2.0 / 3.0, 1.0}};
    double origin_err = 0.0;
    double row_err = 0.0;
    for (std::size_t j = 1; j <= 3; ++j) {
        double row = 0.0;
        for (std::size_t s = 1; s <= 2; ++s) {
            const double v = origin_probability(pair, s, j);
            origin_err = std::max(origin_err, std::abs(v - expected[s - 1][j - 1]));
            row += v;
        }
        row_err = std::max(row_err, std::abs(row - 1.0));
    }
    report.add(CheckRecord::within("merge.origin_values", origin_err, 0.0, 1e-15));
    report.add(CheckRecord::within("merge.origin_row_sums", row_err, 0.0, 0.0));
    return report;
}

VerificationReport verify_packets(const VerifyOptions& options) {
    VerificationReport report;
    const PacketModel model(MergeFamily({RateVector{1.0, 2.0}, RateVector{3.0, 4.0, 5.0}}), 1);
    const RateVector merged = merge(model.family());
    const double t = 1.0;

    const std::size_t n_max = truncation_point(merged, t, 1e-12);
    const auto table = packet_joint_pmf_table(model, n_max, t);
    const auto merged_pmf = pmf_recurrence(merged, n_max, t);
    double row_err = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        double row = 0.0;
        for (double v : table[n]) row += v;
        row_err = std::max(row_err, std::abs(row - merged_pmf[n]));
    }
    report.add(CheckRecord::within("packets.marginal_merged", row_err, 0.0, 1e-8));
    double col_err = 0.0;
    for (std::size_t a = 0; a <= n_max; ++a) {
        double col = 0.0;
        for (std::size_t n = a; n <= n_max; ++n) col += table[n][a];
        col_err = std::max(col_err, std::abs(col - poisson_pmf(model.source_total() * t, static_cast<long long>(a))));
    }
    report.add(CheckRecord::within("packets.marginal_poisson", col_err, 0.0, 1e-8));

    double pgf_err = 0.0;
    for (auto [u, v] : {std::pair{0.3, 0.6}, {-0.5, 0.9}, {1.0, -0.4}}) {
        double series = 0.0;
        for (std::size_t n = 0; n <= n_max; ++n) {
            for (std::size_t a = 0; a <= n; ++a) series += std::pow(u, a) * std::pow(v, n) * table[n][a];
        }
        pgf_err = std::max(pgf_err, std::abs(series - packet_joint_pgf(model, u, v, t)));
    }
    report.add(CheckRecord::within("packets.pgf_series", pgf_err, 0.0, 1e-8));

    double binom_err = 0.0;
    for (long long b = 0; b <= 200; ++b) {
        double sum = 0.0;
        for (long long a = 0; a <= b; ++a) sum += conditional_source_binomial(model, a, b);
        binom_err = std::max(binom_err, std::abs(sum - 1.0));
    }
    report.add(CheckRecord::within("packets.conditional_binomial_sum", binom_err, 0.0, 1e-12));

    report.add(CheckRecord::within("packets.ode_residual", packet_ode_residual(model, 15, t, 1e-4), 0.0, 1e-6));

    const auto early = simulate_packets(model, 1.0, options.seed, options.replications);
    const auto late = simulate_packets(model, 5.0, options.seed + 1, options.replications);
    const auto m1 = moment_estimates(as_doubles(early.packets), as_doubles(early.merged));
    const auto m5 = moment_estimates(as_doubles(late.packets), as_doubles(late.merged));
    const double rho = packet_correlation(model);
    report.add(CheckRecord::within("packets.correlation_t1_z", z_score(m1.correlation, rho, m1.se_correlation), -kBand, kBand));
    report.add(CheckRecord::within("packets.correlation_t5_z", z_score(m5.correlation, rho, m5.se_correlation), -kBand, kBand));
    report.add(CheckRecord::within(
        "packets.correlation_constancy_z",
        z_score(m1.correlation, m5.correlation, std::hypot(m1.se_correlation, m5.se_correlation)), -3.0, 3.0));
    report.add(CheckRecord::within("packets.covariance_z",
                                   z_score(m1.covariance, packet_covariance(model, 1.0), m1.se_covariance), -kBand, kBand));

    // Joint frequencies at t = 1 against the pmf table, cells with expected count >= 25.
    std::map<std::pair<long long, long long>, std::size_t> cells;
    for (std::size_t r = 0; r < early.packets.size(); ++r) ++cells[{early.merged[r], early.packets[r]}];
    const double reps = static_cast<double>(early.packets.size());
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t a = 0; a <= n; ++a) {
            const double p = table[n][a];
            if (reps * p < 25.0) continue;
            ++used;
            const auto it = cells.find({static_cast<long long>(n), static_cast<long long>(a)});
            const double observed = it == cells.end() ? 0.0 : static_cast<double>(it->second);
            worst = std::max(worst, std::abs(z_score(observed, reps * p, std::sqrt(reps * p * (1.0 - p)))));
        }
    }
    report.add(CheckRecord::within("packets.joint_frequency_max_abs_z", used > 0 ? worst : NAN, 0.0, kBand));
    return report;
}

VerificationReport verify_split(const VerifyOptions& options) {
    VerificationReport report;
    const double t = 1.0;

    {
        const RateVector rates{1.0, 2.0};
        const SplitSpec spec({0.3, 0.7});
        const auto check = type1_independence_check(rates, spec, t, options.replications, options.seed);
        double tv = 0.0;
        for (std::size_t i = 1; i <= spec.q(); ++i) {
            const auto emp = EmpiricalDistribution::from_samples(check.counts[i - 1]);
            tv = std::max(tv, tv_distance(emp, component_pmf(type1_component_rates(rates, spec, i), t)));
        }
        report.add(CheckRecord::within("split.type1_max_tv", tv, 0.0, 0.01));
        report.add(CheckRecord::within("split.type1_covariance_z", z_score(check.covariance, 0.0, check.covariance_se),
                                       -kBand, kBand));
        report.add(CheckRecord::within("split.type1_independence_p_value", check.chi_square_p_value, 1e-4, 1.0));
        report.add(CheckRecord::within("split.type1_conservation_violations",
                                       static_cast<double>(check.conservation_violations), 0.0, 0.0));
        double additivity = 0.0;
        for (std::size_t j = 1; j <= rates.k(); ++j) {
            double sum = 0.0;
            for (std::size_t i = 1; i <= spec.q(); ++i) sum += type1_component_rates(rates, spec, i).rate(j);
            additivity = std::max(additivity, std::abs(sum - rates.rate(j)));
        }
        report.add(CheckRecord::within("split.type1_rate_additivity", additivity, 0.0, 1e-15));
    }

    {
        const RateVector rates{1.0, 2.0, 1.0};
        const SplitSpec spec({0.2, 0.3, 0.5});
        const auto samples = simulate_split(rates, spec, 2, t, options.seed, options.replications);
        double worst = 0.0;
        double tv = 0.0;
        for (std::size_t i = 1; i <= spec.q(); ++i) {
            for (std::size_t u = 1; u <= rates.k(); ++u) {
                const auto m = moment_estimates(as_doubles(samples.jumps[i - 1][u - 1]));
                worst = std::max(worst, std::abs(z_score(m.mean, type2_component_rates(rates, spec, i, u) * t, m.se_mean)));
            }
            const auto emp = EmpiricalDistribution::from_samples(samples.counts[i - 1]);
            tv = std::max(tv, tv_distance(emp, component_pmf(type2_component_rate_vector(rates, spec, i), t)));
        }
        report.add(CheckRecord::within("split.type2_jump_rates_max_abs_z", worst, 0.0, kBand));
        report.add(CheckRecord::within("split.type2_max_tv", tv, 0.0, 0.01));
        const auto cov = moment_estimates(as_doubles(samples.counts[0]), as_doubles(samples.counts[2]));
        report.add(CheckRecord::within("split.type2_covariance_z",
                                       z_score(cov.covariance, type2_covariance(rates, spec, 1, 3, t), cov.se_covariance),
                                       -kBand, kBand));
        report.add(CheckRecord::within("split.type2_reconstruction_failures",
                                       static_cast<double>(samples.reconstruction_failures), 0.0, 0.0));
    }

    {
        const RateVector rates{0.0, 1.0};
        const SplitSpec spec({0.5, 0.5});
        const auto samples = simulate_split(rates, spec, 2, t, options.seed + 1, options.replications);
        const auto cov = moment_estimates(as_doubles(samples.counts[0]), as_doubles(samples.counts[1]));
        const double analytic = type2_covariance(rates, spec, 1, 2, t);
        report.add(CheckRecord::within("split.type2_pair_covariance_z", z_score(cov.covariance, analytic, cov.se_covariance),
                                       -kBand, kBand));
        report.add(CheckRecord::within("split.type2_pair_covariance_positive_z", z_score(cov.covariance, 0.0, cov.se_covariance),
                                       kBand, std::numeric_limits<double>::infinity()));
    }

    {
        const RateVector rates{1.0, 2.0};
        const SplitSpec spec({0.3, 0.7});
        const auto ode = type2_marginal_ode_residual(rates, spec, 1, 15, t, 1e-4);
        report.add(CheckRecord::within("split.type2_ode_residual", ode.max_residual, 0.0, 1e-6));
        report.add(CheckRecord::within("split.type2_ode_initial_condition", ode.initial_condition_exact ? 1.0 : 0.0, 1.0, 1.0));
    }

    {
        const RateVector rates{1.7};
        const SplitSpec spec({0.25, 0.35, 0.4});
        double gap = 0.0;
        for (std::size_t i = 1; i <= spec.q(); ++i) {
            gap = std::max(gap, std::abs(type2_component_rate_vector(rates, spec, i).rate(1) -
                                         type1_component_rates(rates, spec, i).rate(1)));
        }
        report.add(CheckRecord::within("split.k1_type1_type2_rate_gap", gap, 0.0, 0.0));
    }
    return report;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"core", "simulate", "merge", "packets", "split", "all"};
    return names;
}

VerificationReport run_suite(std::string_view suite, const VerifyOptions& options) {
    if (suite == "core") return verify_core(options);
    if (suite == "simulate") return verify_simulate(options);
    if (suite == "merge") return verify_merge(options);
    if (suite == "packets") return verify_packets(options);
    if (suite == "split") return verify_split(options);
    if (suite == "all") {
        VerificationReport all;
        for (auto* fn : {verify_core, verify_simulate, verify_merge, verify_packets, verify_split}) all.append(fn(options));
        return all;
    }
    throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
}

}  // namespace gcp
