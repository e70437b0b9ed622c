// Acceptance gate: one PASS/FAIL line per criterion, each under its time limit.
// Usage: acceptance <path-to-gcpkit>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <variant>

#include "gcp/counting.hpp"
#include "gcp/format.hpp"
#include "gcp/packets.hpp"
#include "gcp/simulate.hpp"
#include "gcp/splitting.hpp"
#include "gcp/stats.hpp"
#include "gcp/superpose.hpp"
#include "gcp/thinning.hpp"

using namespace gcp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

constexpr std::size_t kReps = 100000;

double poisson(double mu, long long n) {
    return std::exp(double(n) * std::log(mu) - mu - std::lgamma(double(n) + 1.0));
}

std::vector<double> doubles(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

std::vector<double> full_pmf(const RateVector& r, double t) { return pmf_recurrence(r, truncation_point(r, t, 1e-12), t); }

std::string fmt(double v) { return format_double(v); }

Outcome ac1() {
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        for (long long n = 0; n <= 50; ++n) worst = std::max(worst, std::abs(pmf_enumerated(RateVector{1.0}, n, t) - poisson(t, n)));
    }
    return {worst <= 1e-12, "max_abs_err=" + fmt(worst) + " tol=1e-12"};
}

Outcome ac2() {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> d(0.05, 2.0);
    double worst = 0.0;
    for (int v = 0; v < 10; ++v) {
        std::vector<double> rates(1 + v % 5);
        for (double& x : rates) x = d(gen);
        const RateVector r(rates);
        for (double t : {0.1, 1.0, 5.0}) {
            const auto rec = pmf_recurrence(r, 30, t);
            for (long long n = 0; n <= 30; ++n) worst = std::max(worst, std::abs(rec[n] - pmf_enumerated(r, n, t)));
        }
    }
    return {worst <= 1e-10, "max_abs_err=" + fmt(worst) + " tol=1e-10"};
}

Outcome ac3() {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> d(0.05, 3.0);
    double worst = 0.0;
    for (std::size_t q = 1; q <= 3; ++q) {
        for (std::size_t k = 1; k <= 3; ++k) {
            std::vector<RateVector> parts;
            for (std::size_t i = 0; i < q; ++i) {
                std::vector<double> r(1 + (k + i) % 3);
                for (double& x : r) x = d(gen);
                parts.emplace_back(r);
            }
            const MergeFamily family(parts);
            for (double t : {0.2, 1.0, 2.5}) {
                // Convolution computed here from the component pmfs.
                std::vector<double> conv(21, 0.0);
                conv[0] = 1.0;
                for (const auto& c : parts) {
                    const auto p = pmf_recurrence(c, 20, t);
                    std::vector<double> next(21, 0.0);
                    for (std::size_t n = 0; n <= 20; ++n) {
                        for (std::size_t m = 0; m <= n; ++m) next[n] += conv[m] * p[n - m];
                    }
                    conv = next;
                }
                const auto merged = pmf_recurrence(merge(family), 20, t);
                for (std::size_t n = 0; n <= 20; ++n) worst = std::max(worst, std::abs(merged[n] - conv[n]));
            }
        }
    }
    return {worst <= 1e-10, "max_abs_err=" + fmt(worst) + " tol=1e-10"};
}

Outcome ac4() {
    CountableFamily geo{3, [](std::size_t i) { return RateVector(std::vector<double>(3, std::ldexp(1.0, -int(i)))); },
                        [](std::size_t, std::size_t n) { return std::ldexp(1.0, -int(n)); }, {}};
    const auto g = merge_countable(geo, 1e-9);
    double worst = std::numeric_limits<double>::infinity();
    if (const auto* r = std::get_if<RateVector>(&g)) {
        worst = 0.0;
        for (double b : r->rates()) worst = std::max(worst, std::abs(b - 1.0));
    }
    CountableFamily harmonic{1, [](std::size_t i) { return RateVector{1.0 / double(i)}; },
                             [](std::size_t, std::size_t) { return std::numeric_limits<double>::infinity(); },
                             [](std::size_t j) { return j == 1; }};
    const bool divergent = std::holds_alternative<Divergent>(merge_countable(harmonic, 1e-9));
    return {worst <= 1e-8 && divergent,
            "geometric_err=" + fmt(worst) + " tol=1e-8 harmonic=" + (divergent ? "Divergent" : "not-divergent")};
}

Outcome ac5() {
    const MergeFamily f({RateVector{1.0, 2.0}, RateVector{3.0, 4.0, 5.0}});
    const std::array<double, 3> src1{0.25, 1.0 / 3.0, 0.0};
    double worst = 0.0;
    bool rows_exact = true;
    for (std::size_t j = 1; j <= 3; ++j) {
        const double a = origin_probability(f, 1, j);
        const double b = origin_probability(f, 2, j);
        worst = std::max({worst, std::abs(a - src1[j - 1]), std::abs(b - (1.0 - src1[j - 1]))});
        rows_exact = rows_exact && (a + b == 1.0);
    }
    return {worst <= 1e-15 && rows_exact,
            "max_abs_err=" + fmt(worst) + " tol=1e-15 row_sums_exact=" + (rows_exact ? "true" : "false")};
}

Outcome ac6() {
    const PacketModel model(MergeFamily({RateVector{1.0, 2.0}, RateVector{3.0, 4.0, 5.0}}), 1);
    const RateVector merged = merge(model.family());
    const double t = 1.0;
    const std::size_t n_max = truncation_point(merged, t, 1e-12);
    const auto table = packet_joint_pmf_table(model, n_max, t);
    const auto p = pmf_recurrence(merged, n_max, t);
    double row_err = 0.0;
    double col_err = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        double row = 0.0;
        for (double v : table[n]) row += v;
        row_err = std::max(row_err, std::abs(row - p[n]));
        double col = 0.0;
        for (std::size_t m = n; m <= n_max; ++m) col += table[m][n];
        col_err = std::max(col_err, std::abs(col - poisson(model.source_total() * t, long(n))));
    }
    const bool a = row_err <= 1e-8 && col_err <= 1e-8;

    double binom_err = 0.0;
    for (long long b = 0; b <= 200; ++b) {
        double s = 0.0;
        for (long long k = 0; k <= b; ++k) s += conditional_source_binomial(model, k, b);
        binom_err = std::max(binom_err, std::abs(s - 1.0));
    }
    // "Exactly" up to floating-point round-off of a sum of up to 201 terms.
    const bool b = binom_err <= 1e-12;

    const double ode = packet_ode_residual(model, 15, t, 1e-4);
    const bool c = ode < 1e-6;

    const auto s1 = simulate_packets(model, 1.0, 61, kReps);
    const auto s5 = simulate_packets(model, 5.0, 65, kReps);
    const auto m1 = moment_estimates(doubles(s1.packets), doubles(s1.merged));
    const auto m5 = moment_estimates(doubles(s5.packets), doubles(s5.merged));
    const double z = (m1.correlation - m5.correlation) / std::hypot(m1.se_correlation, m5.se_correlation);
    const bool d = std::abs(z) <= 3.0;

    return {a && b && c && d, "(a) row_err=" + fmt(row_err) + " col_err=" + fmt(col_err) + " (b) binom_err=" +
                                  fmt(binom_err) + " (c) ode=" + fmt(ode) + " (d) rho1=" + fmt(m1.correlation) +
                                  " rho5=" + fmt(m5.correlation) + " z=" + fmt(z)};
}

Outcome ac7() {
    const RateVector r{1.0, 2.0};
    const SplitSpec spec({0.3, 0.7});
    const auto rep = type1_independence_check(r, spec, 1.0, kReps, 71);
    double tv = 0.0;
    for (std::size_t i = 1; i <= 2; ++i) {
        tv = std::max(tv, tv_distance(EmpiricalDistribution::from_samples(rep.counts[i - 1]),
                                      full_pmf(type1_component_rates(r, spec, i), 1.0)));
    }
    const double z = rep.covariance / rep.covariance_se;
    return {tv <= 0.01 && std::abs(z) <= 4.0 && rep.conservation_violations == 0,
            "max_tv=" + fmt(tv) + " cov_z=" + fmt(z) + " conservation_violations=" +
                std::to_string(rep.conservation_violations)};
}

Outcome ac8() {
    const double t = 1.0;
    const RateVector r{1.0, 2.0, 1.0};
    const SplitSpec spec({0.2, 0.3, 0.5});
    const auto s = simulate_split(r, spec, 2, t, 81, kReps);
    double worst = 0.0;
    for (std::size_t i = 1; i <= 3; ++i) {
        for (std::size_t u = 1; u <= 3; ++u) {
            const auto m = moment_estimates(doubles(s.jumps[i - 1][u - 1]));
            worst = std::max(worst, std::abs(m.mean - type2_component_rates(r, spec, i, u) * t) / m.se_mean);
        }
    }
    const bool a = worst <= 4.0 && s.reconstruction_failures == 0;

    const auto pair = simulate_split(RateVector{0.0, 1.0}, SplitSpec({0.5, 0.5}), 2, t, 82, kReps);
    const auto cov = moment_estimates(doubles(pair.counts[0]), doubles(pair.counts[1]));
    const double target = type2_covariance(RateVector{0.0, 1.0}, SplitSpec({0.5, 0.5}), 1, 2, t);
    const double zc = (cov.covariance - target) / cov.se_covariance;
    const double zpos = cov.covariance / cov.se_covariance;
    const bool b = std::abs(zc) <= 4.0 && zpos > 4.0 && target == 0.5;

    const auto ode = type2_marginal_ode_residual(RateVector{1.0, 2.0}, SplitSpec({0.3, 0.7}), 1, 15, t, 1e-4);
    const bool c = ode.max_residual < 1e-6 && ode.initial_condition_exact;

    bool d = true;
    const SplitSpec three({0.25, 0.35, 0.4});
    for (std::size_t i = 1; i <= 3; ++i) {
        d = d && type2_component_rate_vector(RateVector{1.7}, three, i) == type1_component_rates(RateVector{1.7}, three, i);
    }
    return {a && b && c && d, "(a) max_rate_z=" + fmt(worst) + " (b) cov=" + fmt(cov.covariance) + " target=" +
                                  fmt(target) + " z=" + fmt(zc) + " z_vs_0=" + fmt(zpos) + " (c) ode=" +
                                  fmt(ode.max_residual) + " (d) k1_rates_equal=" + (d ? "true" : "false")};
}

Outcome ac9() {
    const RateVector r{1.0, 2.0};
    const auto paths = sample_paths(r, 1.0, 91, kReps);
    std::vector<double> x;
    x.reserve(paths.size());
    for (const auto& p : paths) x.push_back(double(count_at(p, 1.0)));
    const auto m = moment_estimates(x);
    const double zm = (m.mean - 5.0) / m.se_mean;
    const double zv = (m.variance - 9.0) / m.se_variance;
    return {std::abs(zm) <= 4.0 && std::abs(zv) <= 4.0,
            "mean=" + fmt(m.mean) + " z=" + fmt(zm) + " variance=" + fmt(m.variance) + " z=" + fmt(zv)};
}

std::string run_capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    status = pclose(pipe);
    return out;
}

Outcome ac10(const std::string& cli) {
    const std::string cmd = "'" + cli + "' verify --suite all --seed 42";
    int s1 = 0;
    int s2 = 0;
    const std::string a = run_capture(cmd, s1);
    const std::string b = run_capture(cmd, s2);
    const bool same = !a.empty() && a == b;
    std::size_t lines = 0;
    for (char ch : a) lines += ch == '\n';
    return {same && s1 == 0 && s2 == 0, std::string("byte_identical=") + (same ? "true" : "false") + " records=" +
                                            std::to_string(lines) + " exit=" + std::to_string(s1) + "," + std::to_string(s2)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-gcpkit>\n";
        return 2;
    }
    const std::string cli = argv[1];
    struct Criterion {
        const char* id;
        const char* title;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"AC1", "Poisson reduction", 1.0, ac1},
        {"AC2", "recurrence equals enumeration", 10.0, ac2},
        {"AC3", "superposition law", 10.0, ac3},
        {"AC4", "countable merging", 1.0, ac4},
        {"AC5", "origin probabilities", 1.0, ac5},
        {"AC6", "packet process", 120.0, ac6},
        {"AC7", "type I splitting", 120.0, ac7},
        {"AC8", "type II splitting", 180.0, ac8},
        {"AC9", "simulation fidelity", 30.0, ac9},
        {"AC10", "determinism of verify", 600.0, [&] { return ac10(cli); }},
    };
    std::size_t failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(3);
        line << (pass ? "PASS " : "FAIL ") << c.id << ' ' << c.title << ": " << o.detail << " time=" << secs
             << "s limit=" << c.limit_s << 's' << (in_time ? "" : " (too slow)");
        std::cout << line.str() << std::endl;
    }
    std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAILED") << std::endl;
    return failed == 0 ? 0 : 1;
}
