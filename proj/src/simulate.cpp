#include "gcp/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gcp/format.hpp"

namespace gcp {

SamplePath::SamplePath(double horizon, std::size_t k, std::vector<Event> events)
    : horizon_(horizon), k_(k), events_(std::move(events)) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw std::invalid_argument("SamplePath: horizon must be positive and finite");
    }
    if (k_ == 0) throw std::invalid_argument("SamplePath: k must be at least 1");
    double previous = 0.0;
    for (const auto& e : events_) {
        if (!(e.time > previous) || e.time > horizon_) {
            throw std::invalid_argument("SamplePath: event times must strictly increase within (0, horizon]");
        }
        if (e.size == 0 || e.size > k_) {
            throw std::invalid_argument("SamplePath: event size outside 1..k");
        }
        previous = e.time;
    }
}

SamplePath sample_path(const RateVector& rates, double horizon, SeedSpec seed) {
    StreamRng rng(seed);
    return sample_path(rates, horizon, rng);
}

SamplePath sample_path(const RateVector& rates, double horizon, StreamRng& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_path: horizon must be positive");
    const double total = rates.total();
    std::vector<Event> events;
    double t = 0.0;
    while (true) {
        t += rng.exponential(total);
        if (t > horizon) break;
        const auto j = rng.categorical(rates.rates(), total) + 1;
        events.push_back({t, static_cast<std::uint32_t>(j)});
    }
    return SamplePath(horizon, rates.k(), std::move(events));
}

std::vector<SamplePath> sample_paths(const RateVector& rates, double horizon,
                                     std::uint64_t master_seed, std::size_t count) {
    std::vector<SamplePath> out(count, SamplePath(horizon, rates.k()));
    parallel_for(count, [&](std::size_t i) {
        out[i] = sample_path(rates, horizon, SeedSpec{master_seed, i});
    });
    return out;
}

SamplePath superpose_paths(const std::vector<SamplePath>& paths) {
    if (paths.empty()) throw std::invalid_argument("superpose_paths: no paths");
    const double horizon = paths.front().horizon();
    std::size_t k = 0;
    std::vector<Event> all;
    for (const auto& p : paths) {
        if (p.horizon() != horizon) throw std::invalid_argument("superpose_paths: horizons differ");
        k = std::max(k, p.k());
        all.insert(all.end(), p.events().begin(), p.events().end());
    }
    std::stable_sort(all.begin(), all.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
    std::vector<Event> merged;
    for (const auto& e : all) {
        if (!merged.empty() && merged.back().time == e.time) {
            merged.back().size += e.size;
        } else {
            merged.push_back(e);
        }
        k = std::max<std::size_t>(k, merged.back().size);
    }
    return SamplePath(horizon, k, std::move(merged));
}

long long count_at(const SamplePath& path, double t) {
    if (!(t >= 0.0) || t > path.horizon()) {
        throw std::invalid_argument("count_at: t outside [0, horizon]");
    }
    long long total = 0;
    for (const auto& e : path.events()) {
        if (e.time > t) break;
        total += e.size;
    }
    return total;
}

std::vector<long long> increments(const SamplePath& path, const std::vector<double>& grid) {
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw std::invalid_argument("increments: grid must be ascending");
    }
    std::vector<long long> out;
    if (grid.size() < 2) return out;
    long long previous = count_at(path, grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const long long c = count_at(path, grid[i]);
        out.push_back(c - previous);
        previous = c;
    }
    return out;
}

EmpiricalDistribution empirical_distribution(const std::vector<SamplePath>& paths, double t) {
    std::vector<long long> values;
    values.reserve(paths.size());
    for (const auto& p : paths) values.push_back(count_at(p, t));
    return EmpiricalDistribution::from_samples(values);
}

void write_path(std::ostream& out, const SamplePath& path) {
    out << "horizon=" << format_double(path.horizon()) << " k=" << path.k() << '\n';
    for (const auto& e : path.events()) out << format_double(e.time) << ',' << e.size << '\n';
}

std::string serialize_path(const SamplePath& path) {
    std::ostringstream os;
    write_path(os, path);
    return os.str();
}

namespace {

double parse_real(std::string_view s, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument(std::string("read_paths: malformed ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

unsigned long parse_uint(std::string_view s, const char* what) {
    unsigned long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument(std::string("read_paths: malformed ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::vector<SamplePath> read_paths(std::istream& in) {
    std::vector<SamplePath> out;
    std::string line;
    bool open = false;
    double horizon = 0.0;
    std::size_t k = 0;
    std::vector<Event> events;
    auto flush = [&] {
        if (open) out.emplace_back(horizon, k, std::move(events));
        events.clear();
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("horizon=", 0) == 0) {
            flush();
            const auto space = line.find(" k=");
            if (space == std::string::npos) throw std::invalid_argument("read_paths: malformed header '" + line + "'");
            std::string_view view(line);
            horizon = parse_real(view.substr(8, space - 8), "horizon");
            k = parse_uint(view.substr(space + 3), "k");
            open = true;
            continue;
        }
        if (!open) throw std::invalid_argument("read_paths: event line before header");
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("read_paths: malformed event '" + line + "'");
        std::string_view view(line);
        events.push_back({parse_real(view.substr(0, comma), "time"),
                          static_cast<std::uint32_t>(parse_uint(view.substr(comma + 1), "size"))});
    }
    flush();
    return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            constexpr std::size_t chunk = 256;
            while (true) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= count) return;
                const std::size_t end = std::min(count, begin + chunk);
                try {
                    for (std::size_t i = begin; i < end; ++i) body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace gcp
