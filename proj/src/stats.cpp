#include "gcp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include "json.hpp"

#include "gcp/format.hpp"

namespace gcp {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::span<const long long> samples) {
    if (samples.empty()) throw std::invalid_argument("EmpiricalDistribution: no samples");
    EmpiricalDistribution d;
    for (long long v : samples) {
        if (v < 0) throw std::invalid_argument("EmpiricalDistribution: negative sample");
        ++d.counts_[v];
    }
    d.n_ = samples.size();
    return d;
}

std::uint64_t EmpiricalDistribution::count(long long value) const {
    const auto it = counts_.find(value);
    return it == counts_.end() ? 0 : it->second;
}

double EmpiricalDistribution::frequency(long long value) const {
    return static_cast<double>(count(value)) / static_cast<double>(n_);
}

double tv_distance(const EmpiricalDistribution& emp, std::span<const double> pmf) {
    double diff = 0.0;
    double emp_inside = 0.0;
    double pmf_inside = 0.0;
    for (std::size_t v = 0; v < pmf.size(); ++v) {
        const double f = emp.frequency(static_cast<long long>(v));
        diff += std::abs(f - pmf[v]);
        emp_inside += f;
        pmf_inside += pmf[v];
    }
    const double tails = std::max(0.0, 1.0 - emp_inside) + std::max(0.0, 1.0 - pmf_inside);
    return std::min(1.0, 0.5 * (diff + tails));
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::max(a.size(), b.size());
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        diff += std::abs(x - y);
    }
    return 0.5 * diff;
}

namespace {

double chi_square_p_value(double statistic, std::size_t dof) {
    return boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

}  // namespace

ChiSquareResult chi_square_gof(const EmpiricalDistribution& emp, std::span<const double> pmf,
                               double min_expected) {
    if (pmf.empty()) throw std::runtime_error("chi_square_gof: empty pmf");
    const double n = static_cast<double>(emp.n());
    const std::size_t last = pmf.size() - 1;

    // Raw cells: values 0..last-1 individually, then the open tail [last, inf).
    std::vector<double> expected;
    std::vector<double> observed;
    double head_mass = 0.0;
    for (std::size_t v = 0; v < last; ++v) {
        expected.push_back(n * pmf[v]);
        observed.push_back(static_cast<double>(emp.count(static_cast<long long>(v))));
        head_mass += pmf[v];
    }
    double tail_observed = 0.0;
    for (const auto& [value, c] : emp.counts()) {
        if (value >= static_cast<long long>(last)) tail_observed += static_cast<double>(c);
    }
    expected.push_back(n * std::max(0.0, 1.0 - head_mass));
    observed.push_back(tail_observed);

    std::vector<double> pooled_e;
    std::vector<double> pooled_o;
    double acc_e = 0.0;
    double acc_o = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        acc_e += expected[i];
        acc_o += observed[i];
        if (acc_e >= min_expected) {
            pooled_e.push_back(acc_e);
            pooled_o.push_back(acc_o);
            acc_e = acc_o = 0.0;
        }
    }
    if (acc_e > 0.0 || acc_o > 0.0) {
        if (pooled_e.empty()) {
            pooled_e.push_back(acc_e);
            pooled_o.push_back(acc_o);
        } else {
            pooled_e.back() += acc_e;
            pooled_o.back() += acc_o;
        }
    }
    if (pooled_e.size() < 2) throw std::runtime_error("chi_square_gof: fewer than 2 pooled bins");

    ChiSquareResult r;
    for (std::size_t i = 0; i < pooled_e.size(); ++i) {
        const double d = pooled_o[i] - pooled_e[i];
        r.statistic += d * d / pooled_e[i];
    }
    r.dof = pooled_e.size() - 1;
    r.p_value = chi_square_p_value(r.statistic, r.dof);
    return r;
}

namespace {

// Category boundaries for one margin: each closed category holds at least
// `threshold` observations; the last one is open ended.
std::vector<long long> margin_cuts(const std::map<long long, double>& freq, double threshold) {
    std::vector<long long> starts;
    double acc = 0.0;
    long long start = freq.begin()->first;
    for (auto it = freq.begin(); it != freq.end(); ++it) {
        acc += it->second;
        if (acc >= threshold) {
            starts.push_back(start);
            acc = 0.0;
            auto next = std::next(it);
            if (next != freq.end()) start = next->first;
            else start = std::numeric_limits<long long>::max();
        }
    }
    if (acc > 0.0 && starts.empty()) starts.push_back(freq.begin()->first);
    return starts;
}

std::size_t category_of(const std::vector<long long>& starts, long long v) {
    auto it = std::upper_bound(starts.begin(), starts.end(), v);
    return it == starts.begin() ? 0 : static_cast<std::size_t>(it - starts.begin() - 1);
}

}  // namespace

ChiSquareResult chi_square_independence(std::span<const long long> x, std::span<const long long> y,
                                        double min_expected) {
    if (x.size() != y.size() || x.empty()) {
        throw std::invalid_argument("chi_square_independence: need equally sized non-empty samples");
    }
    const double n = static_cast<double>(x.size());
    std::map<long long, double> fx;
    std::map<long long, double> fy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        fx[x[i]] += 1.0;
        fy[y[i]] += 1.0;
    }

    double threshold = min_expected;
    while (true) {
        const auto cx = margin_cuts(fx, threshold);
        const auto cy = margin_cuts(fy, threshold);
        if (cx.size() < 2 || cy.size() < 2) {
            throw std::runtime_error("chi_square_independence: fewer than 2 categories per margin");
        }
        std::vector<double> table(cx.size() * cy.size(), 0.0);
        std::vector<double> rows(cx.size(), 0.0);
        std::vector<double> cols(cy.size(), 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto a = category_of(cx, x[i]);
            const auto b = category_of(cy, y[i]);
            table[a * cy.size() + b] += 1.0;
            rows[a] += 1.0;
            cols[b] += 1.0;
        }
        const double min_cell = *std::min_element(rows.begin(), rows.end()) *
                                *std::min_element(cols.begin(), cols.end()) / n;
        if (min_cell < min_expected) {
            threshold *= 1.5;
            continue;
        }
        ChiSquareResult r;
        for (std::size_t a = 0; a < rows.size(); ++a) {
            for (std::size_t b = 0; b < cols.size(); ++b) {
                const double e = rows[a] * cols[b] / n;
                const double d = table[a * cols.size() + b] - e;
                r.statistic += d * d / e;
            }
        }
        r.dof = (rows.size() - 1) * (cols.size() - 1);
        r.p_value = chi_square_p_value(r.statistic, r.dof);
        return r;
    }
}

namespace {

double jackknife_se(std::size_t n, const std::function<double(std::size_t)>& leave_out) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += leave_out(i);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = leave_out(i) - mean;
        ss += d * d;
    }
    return std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * ss);
}

// Centred sums for O(1) leave-one-out updates.
struct CentredSums {
    double centre = 0.0;
    std::vector<double> d;
    double s1 = 0.0;
    double s2 = 0.0;

    explicit CentredSums(std::span<const double> v) {
        for (double x : v) centre += x;
        centre /= static_cast<double>(v.size());
        d.reserve(v.size());
        for (double x : v) {
            d.push_back(x - centre);
            s1 += d.back();
            s2 += d.back() * d.back();
        }
    }
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MomentEstimates univariate(const CentredSums& c) {
    const std::size_t n = c.d.size();
    const double nn = static_cast<double>(n);
    MomentEstimates m;
    m.n = n;
    m.mean = c.centre + c.s1 / nn;
    m.variance = (c.s2 - c.s1 * c.s1 / nn) / (nn - 1.0);
    const double mm = nn - 1.0;
    m.se_mean = jackknife_se(n, [&](std::size_t i) { return c.centre + (c.s1 - c.d[i]) / mm; });
    if (n < 3) {
        m.se_variance = kNaN;
    } else {
        m.se_variance = jackknife_se(n, [&](std::size_t i) {
            const double s1 = c.s1 - c.d[i];
            const double s2 = c.s2 - c.d[i] * c.d[i];
            return (s2 - s1 * s1 / mm) / (mm - 1.0);
        });
    }
    return m;
}

}  // namespace

MomentEstimates moment_estimates(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("moment_estimates: need at least 2 samples");
    return univariate(CentredSums(samples));
}

BivariateMoments moment_estimates(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("moment_estimates: unequal sample sizes");
    if (x.size() < 2) throw std::invalid_argument("moment_estimates: need at least 2 samples");
    const CentredSums cx(x);
    const CentredSums cy(y);
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxy += cx.d[i] * cy.d[i];

    BivariateMoments b;
    b.x = univariate(cx);
    b.y = univariate(cy);
    b.covariance = (sxy - cx.s1 * cy.s1 / nn) / (nn - 1.0);
    const double denom = std::sqrt(b.x.variance * b.y.variance);
    b.correlation = denom > 0.0 ? b.covariance / denom : kNaN;
    if (n < 3) {
        b.se_covariance = b.se_correlation = kNaN;
        return b;
    }
    const double mm = nn - 1.0;
    auto loo = [&](std::size_t i, bool corr) {
        const double s1x = cx.s1 - cx.d[i];
        const double s1y = cy.s1 - cy.d[i];
        const double cov = (sxy - cx.d[i] * cy.d[i] - s1x * s1y / mm) / (mm - 1.0);
        if (!corr) return cov;
        const double vx = (cx.s2 - cx.d[i] * cx.d[i] - s1x * s1x / mm) / (mm - 1.0);
        const double vy = (cy.s2 - cy.d[i] * cy.d[i] - s1y * s1y / mm) / (mm - 1.0);
        return cov / std::sqrt(vx * vy);
    };
    b.se_covariance = jackknife_se(n, [&](std::size_t i) { return loo(i, false); });
    b.se_correlation = denom > 0.0 ? jackknife_se(n, [&](std::size_t i) { return loo(i, true); }) : kNaN;
    return b;
}

double ode_residual(const std::function<std::vector<double>(double)>& state,
                    const std::function<std::vector<double>(double)>& rhs,
                    std::span<const double> grid, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("ode_residual: dt must be positive");
    double worst = 0.0;
    for (double t : grid) {
        std::vector<double> derivative;
        if (t >= dt) {
            const auto up = state(t + dt);
            const auto down = state(t - dt);
            derivative.resize(up.size());
            for (std::size_t i = 0; i < up.size(); ++i) derivative[i] = (up[i] - down[i]) / (2.0 * dt);
        } else {
            const auto f0 = state(t);
            const auto f1 = state(t + dt);
            const auto f2 = state(t + 2.0 * dt);
            derivative.resize(f0.size());
            for (std::size_t i = 0; i < f0.size(); ++i) {
                derivative[i] = (-3.0 * f0[i] + 4.0 * f1[i] - f2[i]) / (2.0 * dt);
            }
        }
        const auto r = rhs(t);
        if (r.size() != derivative.size()) throw std::invalid_argument("ode_residual: size mismatch");
        for (std::size_t i = 0; i < r.size(); ++i) worst = std::max(worst, std::abs(derivative[i] - r[i]));
    }
    return worst;
}

CheckRecord CheckRecord::within(std::string name, double statistic, double lo, double hi) {
    return {std::move(name), statistic, lo, hi, statistic >= lo && statistic <= hi};
}

void VerificationReport::append(const VerificationReport& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

bool VerificationReport::all_passed() const noexcept {
    return std::all_of(records_.begin(), records_.end(), [](const auto& r) { return r.pass; });
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    for (const auto& r : records_) {
        os << "name=" << r.name << " statistic=" << format_double(r.statistic) << " band=["
           << format_double(r.band_lo) << ',' << format_double(r.band_hi)
           << "] pass=" << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string VerificationReport::to_json() const {
    std::string out;
    for (const auto& r : records_) {
        const nlohmann::json line{{"name", r.name},
                                  {"statistic", r.statistic},
                                  {"band", {r.band_lo, r.band_hi}},
                                  {"pass", r.pass}};
        out += line.dump() + '\n';
    }
    return out;
}

}  // namespace gcp
