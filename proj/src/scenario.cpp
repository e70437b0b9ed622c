#include "gcp/scenario.hpp"

#include <stdexcept>

#include "gcp/counting.hpp"
#include "gcp/splitting.hpp"

namespace gcp {
namespace {

std::vector<double> capped(std::vector<double> rates, std::size_t cap) {
    if (cap < rates.size()) rates.resize(cap);
    return rates;
}

double expected_count(const std::vector<double>& rates, double t) {
    double m = 0.0;
    for (std::size_t j = 1; j <= rates.size(); ++j) m += static_cast<double>(j) * rates[j - 1] * t;
    return m;
}

void add_rates(ScenarioReport& report, const std::string& prefix, const std::vector<double>& rates) {
    for (std::size_t j = 1; j <= rates.size(); ++j) report.emplace_back(prefix + ".rate" + std::to_string(j), rates[j - 1]);
}

}  // namespace

ScenarioReport fishing_report(const MergeFamily& fish_types, double t, std::optional<long long> b) {
    if (!(t >= 0.0)) throw std::invalid_argument("fishing: t must be non-negative");
    if (b && *b < 0) throw std::invalid_argument("fishing: b must be non-negative");
    ScenarioReport report;
    const RateVector beta = merge(fish_types);
    add_rates(report, "merged", {beta.rates().begin(), beta.rates().end()});
    report.emplace_back("expected_catch", mean(beta, t));
    double all_events = 0.0;
    for (const auto& c : fish_types.components()) all_events += c.total();
    for (std::size_t i = 1; i <= fish_types.size(); ++i) {
        const double lambda_i = fish_types.component(i).total();
        const std::string tag = "type" + std::to_string(i);
        report.emplace_back(tag + ".expected_events", lambda_i * t);
        if (b) report.emplace_back(tag + ".expected_events_given_b", static_cast<double>(*b) * lambda_i / all_events);
    }
    return report;
}

ScenarioReport hotel_report(const RateVector& bookings, const SplitSpec& room_types,
                            const std::vector<std::size_t>& caps, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("hotel: t must be non-negative");
    if (!caps.empty() && caps.size() != room_types.q()) {
        throw std::invalid_argument("hotel: caps needs one entry per room type");
    }
    ScenarioReport report;
    report.emplace_back("expected_bookings", mean(bookings, t));
    for (std::size_t i = 1; i <= room_types.q(); ++i) {
        const std::size_t cap = caps.empty() ? bookings.k() : caps[i - 1];
        if (cap == 0) throw std::invalid_argument("hotel: cap for room type " + std::to_string(i) + " must be positive");
        std::vector<double> whole(bookings.rates().begin(), bookings.rates().end());
        for (double& r : whole) r *= room_types.p(i);
        whole = capped(std::move(whole), cap);
        std::vector<double> units(bookings.k());
        for (std::size_t u = 1; u <= bookings.k(); ++u) units[u - 1] = type2_component_rates(bookings, room_types, i, u);
        units = capped(std::move(units), cap);

        const std::string tag = "room" + std::to_string(i);
        add_rates(report, tag + ".case1", whole);
        report.emplace_back(tag + ".case1.expected_bookings", expected_count(whole, t));
        add_rates(report, tag + ".case2", units);
        report.emplace_back(tag + ".case2.expected_bookings", expected_count(units, t));
    }
    return report;
}

}  // namespace gcp
