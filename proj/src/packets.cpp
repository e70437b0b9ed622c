#include "gcp/packets.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "gcp/counting.hpp"
#include "gcp/simulate.hpp"
#include "gcp/stats.hpp"

namespace gcp {

PacketModel::PacketModel(MergeFamily family, std::size_t source)
    : family_(std::move(family)), source_(source) {
    if (source_ == 0 || source_ > family_.size()) {
        throw std::invalid_argument("PacketModel: source index outside 1..q");
    }
    source_total_ = family_.component(source_).total();
    if (!(source_total_ > 0.0)) throw std::invalid_argument("PacketModel: source rate must be positive");
    other_rates_.assign(family_.k_max(), 0.0);
    for (std::size_t s = 1; s <= family_.size(); ++s) {
        const auto& c = family_.component(s);
        total_ += c.total();
        if (s == source_) continue;
        for (std::size_t l = 1; l <= c.k(); ++l) other_rates_[l - 1] += c.rate(l);
    }
}

namespace {

void require_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(who) + ": t must be finite and non-negative");
    }
}

// log of prod_j (rate_j t)^{x_j} / x_j!; -inf when a zero rate carries x_j > 0.
double log_poisson_product(const std::vector<double>& log_rate_t, const std::vector<std::uint32_t>& x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0) continue;
        if (std::isinf(log_rate_t[j])) return -INFINITY;
        acc += x[j] * log_rate_t[j] - std::lgamma(x[j] + 1.0);
    }
    return acc;
}

std::vector<double> log_rates_times(std::span<const double> rates, double t) {
    std::vector<double> out;
    out.reserve(rates.size());
    for (double r : rates) out.push_back(r * t > 0.0 ? std::log(r * t) : -INFINITY);
    return out;
}

// Source-side factor: R[a][m] = sum over r with sum r_j = a, sum j r_j = m of
// prod_j Poisson(r_j; lambda_j^(i) t), for a <= a_max and m <= m_max.
std::vector<std::vector<double>> source_factor(const PacketModel& model, std::size_t a_max,
                                               std::size_t m_max, double t) {
    const auto& src = model.source_rates();
    const auto log_rt = log_rates_times(src.rates(), t);
    const double shift = model.source_total() * t;
    const std::size_t k = src.k();
    std::vector<std::vector<double>> out(a_max + 1, std::vector<double>(m_max + 1, 0.0));
    std::vector<std::uint32_t> r(k, 0);
    std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)> visit =
        [&](std::size_t pos, std::size_t left, std::size_t a, std::size_t weight) {
            if (weight > m_max) return;
            if (pos + 1 == k) {
                r[pos] = static_cast<std::uint32_t>(left);
                const std::size_t m = weight + left * k;
                if (m <= m_max) {
                    const double lp = log_poisson_product(log_rt, r);
                    if (!std::isinf(lp)) out[a][m] += std::exp(lp - shift);
                }
                r[pos] = 0;
                return;
            }
            for (std::size_t c = 0; c <= left; ++c) {
                r[pos] = static_cast<std::uint32_t>(c);
                visit(pos + 1, left - c, a, weight + c * (pos + 1));
            }
            r[pos] = 0;
        };
    for (std::size_t a = 0; a <= a_max; ++a) visit(0, a, a, 0);
    return out;
}

// Other-sources factor: S[rem] = sum over partitions s of rem (parts <= k_max)
// of prod_l Poisson(s_l; nu_l t).
std::vector<double> other_factor(const PacketModel& model, std::size_t rem_max, double t) {
    const auto& nu = model.other_rates();
    const auto log_rt = log_rates_times(nu, t);
    double shift = 0.0;
    for (double v : nu) shift += v * t;
    std::vector<double> out(rem_max + 1, 0.0);
    for (std::size_t rem = 0; rem <= rem_max; ++rem) {
        for (const auto& s : enumerate_partitions(nu.size(), rem)) {
            const double lp = log_poisson_product(log_rt, s);
            if (!std::isinf(lp)) out[rem] += std::exp(lp - shift);
        }
    }
    return out;
}

}  // namespace

double packet_joint_pmf(const PacketModel& model, long long a, long long n, double t) {
    require_time(t, "packet_joint_pmf");
    if (a < 0 || n < 0) throw std::invalid_argument("packet_joint_pmf: a and n must be non-negative");
    if (a > n) throw std::invalid_argument("packet_joint_pmf: requires a <= n");
    const auto aa = static_cast<std::size_t>(a);
    const auto nn = static_cast<std::size_t>(n);
    const auto src = source_factor(model, aa, nn, t);
    const auto oth = other_factor(model, nn, t);
    double p = 0.0;
    for (std::size_t m = 0; m <= nn; ++m) p += src[aa][m] * oth[nn - m];
    return p;
}

std::vector<std::vector<double>> packet_joint_pmf_table(const PacketModel& model, std::size_t n_max,
                                                        double t) {
    require_time(t, "packet_joint_pmf_table");
    const auto src = source_factor(model, n_max, n_max, t);
    const auto oth = other_factor(model, n_max, t);
    std::vector<std::vector<double>> table(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        table[n].assign(n + 1, 0.0);
        for (std::size_t a = 0; a <= n; ++a) {
            double p = 0.0;
            for (std::size_t m = a; m <= n; ++m) p += src[a][m] * oth[n - m];
            table[n][a] = p;
        }
    }
    return table;
}

double packet_joint_pgf(const PacketModel& model, double u, double v, double t) {
    require_time(t, "packet_joint_pgf");
    if (!(std::abs(u) <= 1.0) || !(std::abs(v) <= 1.0)) {
        throw std::invalid_argument("packet_joint_pgf: u and v must lie in [-1, 1]");
    }
    double exponent = -model.total();
    const auto& src = model.source_rates();
    double vp = 1.0;
    for (std::size_t j = 1; j <= model.family().k_max(); ++j) {
        vp *= v;
        exponent += src.rate(j) * u * vp + model.other_rates()[j - 1] * vp;
    }
    return std::exp(exponent * t);
}

double conditional_source_binomial(const PacketModel& model, long long a, long long b) {
    if (b < 0) throw std::invalid_argument("conditional_source_binomial: b must be non-negative");
    if (a < 0 || a > b) return 0.0;
    const double p = model.source_total() / model.total();
    const double q = (model.total() - model.source_total()) / model.total();
    if (q == 0.0) return a == b ? 1.0 : 0.0;
    if (b > 60) {
        const double log_choose = std::lgamma(b + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b - a + 1.0);
        return std::exp(log_choose + a * std::log(p) + (b - a) * std::log(q));
    }
    double choose = 1.0;
    const long long lo = std::min(a, b - a);
    for (long long i = 1; i <= lo; ++i) choose = choose * static_cast<double>(b - lo + i) / static_cast<double>(i);
    return choose * std::pow(p, static_cast<double>(a)) * std::pow(q, static_cast<double>(b - a));
}

double packet_covariance(const PacketModel& model, double t) {
    require_time(t, "packet_covariance");
    return mean(model.source_rates(), t);
}

double packet_correlation(const PacketModel& model) {
    const double second = variance(merge(model.family()), 1.0);
    return mean(model.source_rates(), 1.0) / (std::sqrt(model.source_total()) * std::sqrt(second));
}

std::vector<double> packet_master_rhs(const PacketModel& model,
                                      const std::vector<std::vector<double>>& table) {
    const std::size_t n_max = table.empty() ? 0 : table.size() - 1;
    auto at = [&](long long a, long long n) -> double {
        if (n < 0 || a < 0 || a > n || static_cast<std::size_t>(n) > n_max) return 0.0;
        return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(a)];
    };
    const auto& src = model.source_rates();
    const auto& nu = model.other_rates();
    std::vector<double> out;
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t a = 0; a <= n; ++a) {
            const auto ai = static_cast<long long>(a);
            const auto ni = static_cast<long long>(n);
            double r = -model.total() * at(ai, ni);
            for (std::size_t j = 1; j <= src.k(); ++j) r += src.rate(j) * at(ai - 1, ni - static_cast<long long>(j));
            for (std::size_t l = 1; l <= nu.size(); ++l) r += nu[l - 1] * at(ai, ni - static_cast<long long>(l));
            out.push_back(r);
        }
    }
    return out;
}

double packet_ode_residual(const PacketModel& model, std::size_t n_max, double t, double dt) {
    auto flat = [&](double s) {
        std::vector<double> v;
        for (const auto& row : packet_joint_pmf_table(model, n_max, s)) v.insert(v.end(), row.begin(), row.end());
        return v;
    };
    auto rhs = [&](double s) { return packet_master_rhs(model, packet_joint_pmf_table(model, n_max, s)); };
    const double grid[] = {t};
    return ode_residual(flat, rhs, grid, dt);
}

PacketSamples simulate_packets(const PacketModel& model, double t, std::uint64_t master_seed,
                               std::size_t replications) {
    if (!(t > 0.0)) throw std::invalid_argument("simulate_packets: t must be positive");
    PacketSamples out;
    out.packets.assign(replications, 0);
    out.merged.assign(replications, 0);
    const auto& family = model.family();
    parallel_for(replications, [&](std::size_t r) {
        long long merged = 0;
        long long packets = 0;
        for (std::size_t s = 1; s <= family.size(); ++s) {
            StreamRng rng(SeedSpec{master_seed, r}, s);
            const SamplePath path = sample_path(family.component(s), t, rng);
            merged += count_at(path, t);
            if (s == model.source()) packets = static_cast<long long>(path.events().size());
        }
        out.packets[r] = packets;
        out.merged[r] = merged;
    });
    return out;
}

}  // namespace gcp
