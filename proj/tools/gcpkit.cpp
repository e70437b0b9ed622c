// Command-line front end: exact distributions, merging, splitting, packet
// statistics, simulation, scenario presets and the verification suites.

#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gcp/config.hpp"
#include "gcp/counting.hpp"
#include "gcp/format.hpp"
#include "gcp/packets.hpp"
#include "gcp/scenario.hpp"
#include "gcp/simulate.hpp"
#include "gcp/splitting.hpp"
#include "gcp/superpose.hpp"
#include "gcp/thinning.hpp"
#include "gcp/verify.hpp"

namespace {

using nlohmann::json;

struct Flags {
    std::vector<std::string> rates;
    std::optional<double> t;
    std::optional<std::size_t> n_max;
    std::optional<std::string> p;
    std::optional<int> type;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> config;
    bool json = false;

    double u = 0.0;
    std::optional<std::size_t> source;
    std::size_t j = 1;
    std::optional<long long> b;
    std::optional<std::string> caps;
    std::optional<std::size_t> replications;
    std::string suite = "all";
    std::string scenario;
    bool summary = false;
};

gcp::ScenarioConfig config_of(const Flags& f) {
    return f.config ? gcp::load_config(*f.config) : gcp::ScenarioConfig{};
}

double time_of(const Flags& f, const gcp::ScenarioConfig& cfg) { return f.t.value_or(cfg.t); }

gcp::RateVector single_profile(const Flags& f) {
    if (f.rates.size() == 1) return gcp::RateVector::parse(f.rates.front());
    if (f.rates.empty() && f.config) return config_of(f).split_profile();
    throw std::invalid_argument("exactly one --rates profile is required");
}

gcp::MergeFamily family_of(const Flags& f) {
    if (!f.rates.empty()) {
        std::vector<gcp::RateVector> parts;
        for (const auto& r : f.rates) parts.push_back(gcp::RateVector::parse(r));
        return gcp::MergeFamily(std::move(parts));
    }
    if (f.config) return config_of(f).family();
    throw std::invalid_argument("merge family is empty: give --rates at least once or --config");
}

std::optional<gcp::SplitSpec> split_of(const Flags& f, const gcp::ScenarioConfig& cfg) {
    if (f.p) return gcp::SplitSpec::parse(*f.p);
    return cfg.split;
}

void print_value(const Flags& f, const std::string& key, double value) {
    if (f.json) {
        std::cout << json{{"name", key}, {"value", value}}.dump() << '\n';
    } else {
        std::cout << key << '=' << gcp::format_double(value) << '\n';
    }
}

void print_rates(const Flags& f, const std::string& key, std::span<const double> rates) {
    if (f.json) {
        std::cout << json{{"name", key}, {"rates", std::vector<double>(rates.begin(), rates.end())}}.dump() << '\n';
    } else {
        std::cout << key << '=' << gcp::format_list(rates) << '\n';
    }
}

int cmd_pmf(const Flags& f) {
    const auto rates = single_profile(f);
    const double t = time_of(f, config_of(f));
    const std::size_t n_max = f.n_max.value_or(gcp::truncation_point(rates, t, 1e-12));
    const auto p = gcp::pmf_recurrence(rates, n_max, t);
    if (!f.json) std::cout << "n,p\n";
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (f.json) {
            std::cout << json{{"n", n}, {"p", p[n]}}.dump() << '\n';
        } else {
            std::cout << n << ',' << gcp::format_double(p[n]) << '\n';
        }
    }
    return 0;
}

int cmd_pgf(const Flags& f) {
    const auto rates = single_profile(f);
    print_value(f, "pgf", gcp::pgf(rates, f.u, time_of(f, config_of(f))));
    return 0;
}

int cmd_moments(const Flags& f) {
    const auto rates = single_profile(f);
    const double t = time_of(f, config_of(f));
    print_value(f, "mean", gcp::mean(rates, t));
    print_value(f, "variance", gcp::variance(rates, t));
    return 0;
}

int cmd_merge(const Flags& f) {
    const auto family = family_of(f);
    const auto beta = gcp::merge(family);
    print_rates(f, "beta", beta.rates());
    if (!f.json) std::cout << "source,j,probability\n";
    for (std::size_t s = 1; s <= family.size(); ++s) {
        for (std::size_t j = 1; j <= family.k_max(); ++j) {
            if (beta.rate(j) == 0.0) continue;
            const double v = gcp::origin_probability(family, s, j);
            if (f.json) {
                std::cout << json{{"source", s}, {"j", j}, {"probability", v}}.dump() << '\n';
            } else {
                std::cout << s << ',' << j << ',' << gcp::format_double(v) << '\n';
            }
        }
    }
    return 0;
}

int cmd_origin(const Flags& f) {
    const auto family = family_of(f);
    print_value(f, "probability", gcp::origin_probability(family, f.source.value_or(1), f.j));
    return 0;
}

int cmd_split(const Flags& f) {
    const auto cfg = config_of(f);
    const auto rates = single_profile(f);
    const auto spec = split_of(f, cfg);
    if (!spec) throw std::invalid_argument("split needs --p or a [split] p entry");
    const int type = f.type.value_or(cfg.split_type);
    const double t = time_of(f, cfg);
    for (std::size_t i = 1; i <= spec->q(); ++i) {
        if (spec->p(i) == 0.0) continue;  // a zero-probability component never jumps
        const auto part = type == 1 ? gcp::type1_component_rates(rates, *spec, i)
                                    : gcp::type2_component_rate_vector(rates, *spec, i);
        print_rates(f, "component" + std::to_string(i), part.rates());
    }
    if (type == 2) {
        for (std::size_t x = 1; x <= spec->q(); ++x) {
            for (std::size_t y = x + 1; y <= spec->q(); ++y) {
                print_value(f, "covariance" + std::to_string(x) + "_" + std::to_string(y),
                            gcp::type2_covariance(rates, *spec, x, y, t));
            }
        }
    }
    return 0;
}

int cmd_packet(const Flags& f) {
    const auto cfg = config_of(f);
    const gcp::PacketModel model(family_of(f), f.source.value_or(cfg.source));
    const double t = time_of(f, cfg);
    print_value(f, "source_total", model.source_total());
    print_value(f, "total", model.total());
    print_value(f, "covariance", gcp::packet_covariance(model, t));
    print_value(f, "correlation", gcp::packet_correlation(model));
    if (const auto b = f.b ? f.b : cfg.b) {
        if (!f.json) std::cout << "a,conditional_probability\n";
        for (long long a = 0; a <= *b; ++a) {
            const double v = gcp::conditional_source_binomial(model, a, *b);
            if (f.json) {
                std::cout << json{{"a", a}, {"b", *b}, {"probability", v}}.dump() << '\n';
            } else {
                std::cout << a << ',' << gcp::format_double(v) << '\n';
            }
        }
    }
    if (f.n_max) {
        const auto table = gcp::packet_joint_pmf_table(model, *f.n_max, t);
        if (!f.json) std::cout << "a,n,p\n";
        for (std::size_t n = 0; n < table.size(); ++n) {
            for (std::size_t a = 0; a <= n; ++a) {
                if (f.json) {
                    std::cout << json{{"a", a}, {"n", n}, {"p", table[n][a]}}.dump() << '\n';
                } else {
                    std::cout << a << ',' << n << ',' << gcp::format_double(table[n][a]) << '\n';
                }
            }
        }
    }
    return 0;
}

int cmd_simulate(const Flags& f) {
    const auto cfg = config_of(f);
    const auto rates = single_profile(f);
    const double horizon = time_of(f, cfg);
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate needs a positive horizon --t");
    const std::size_t count = f.paths.value_or(cfg.paths);
    if (count == 0) throw CLI::ValidationError("--paths", "must be at least 1");
    const auto paths = gcp::sample_paths(rates, horizon, f.seed.value_or(cfg.seed), count);
    if (f.summary) {
        const auto emp = gcp::empirical_distribution(paths, horizon);
        if (!f.json) std::cout << "n,count,frequency\n";
        for (const auto& [n, c] : emp.counts()) {
            if (f.json) {
                std::cout << json{{"n", n}, {"count", c}, {"frequency", emp.frequency(n)}}.dump() << '\n';
            } else {
                std::cout << n << ',' << c << ',' << gcp::format_double(emp.frequency(n)) << '\n';
            }
        }
        return 0;
    }
    for (std::size_t r = 0; r < paths.size(); ++r) {
        if (f.json) {
            json events = json::array();
            for (const auto& e : paths[r].events()) events.push_back({e.time, e.size});
            std::cout << json{{"path", r}, {"horizon", horizon}, {"k", paths[r].k()}, {"events", events}}.dump() << '\n';
        } else {
            gcp::write_path(std::cout, paths[r]);
        }
    }
    return 0;
}

int cmd_verify(const Flags& f) {
    const auto cfg = config_of(f);
    gcp::VerifyOptions options;
    options.seed = f.seed.value_or(cfg.seed);
    options.replications = f.replications.value_or(cfg.replications);
    const auto report = gcp::run_suite(f.suite, options);
    std::cout << (f.json ? report.to_json() : report.to_text());
    return report.all_passed() ? 0 : 1;
}

int cmd_scenario(const Flags& f) {
    const auto cfg = config_of(f);
    const double t = time_of(f, cfg);
    gcp::ScenarioReport report;
    if (f.scenario == "fishing") {
        report = gcp::fishing_report(family_of(f), t, f.b ? f.b : cfg.b);
    } else {
        const auto spec = split_of(f, cfg);
        if (!spec) throw std::invalid_argument("hotel needs room-type probabilities --p");
        std::vector<std::size_t> caps = cfg.caps;
        if (f.caps) {
            caps.clear();
            std::stringstream ss(*f.caps);
            std::string item;
            while (std::getline(ss, item, ',')) caps.push_back(std::stoul(item));
        }
        report = gcp::hotel_report(single_profile(f), *spec, caps, t);
    }
    for (const auto& [key, value] : report) print_value(f, key, value);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized counting processes: distributions, merging, splitting, simulation"};
    app.require_subcommand(1);
    Flags f;

    auto rates_opt = [&](CLI::App* cmd, const std::string& help) {
        cmd->add_option("--rates", f.rates, help)->allow_extra_args(false);
    };
    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--t", f.t, "time (or horizon)")->check(CLI::NonNegativeNumber);
        cmd->add_option("--config", f.config, "scenario configuration file")->check(CLI::ExistingFile);
        cmd->add_flag("--json", f.json, "one JSON object per record");
    };

    auto* pmf = app.add_subcommand("pmf", "state probabilities p(n, t) as CSV");
    rates_opt(pmf, "jump rates, comma separated");
    common(pmf);
    pmf->add_option("--n-max", f.n_max, "largest n (default: tail mass below 1e-12)");

    auto* pgf = app.add_subcommand("pgf", "probability generating function");
    rates_opt(pgf, "jump rates");
    common(pgf);
    pgf->add_option("--u", f.u, "argument in [-1, 1]")->required();

    auto* moments = app.add_subcommand("moments", "mean and variance");
    rates_opt(moments, "jump rates");
    common(moments);

    auto* merge = app.add_subcommand("merge", "merged rates and origin probabilities");
    rates_opt(merge, "one component per occurrence");
    common(merge);

    auto* origin = app.add_subcommand("origin", "probability that a size-j packet came from a source");
    rates_opt(origin, "one component per occurrence");
    common(origin);
    origin->add_option("--source", f.source, "1-based component index")->required();
    origin->add_option("--j", f.j, "packet size")->required();

    auto* split = app.add_subcommand("split", "component rates after splitting");
    rates_opt(split, "jump rates");
    common(split);
    split->add_option("--p", f.p, "routing probabilities, comma separated");
    split->add_option("--type", f.type, "1: whole packets, 2: unit by unit")->check(CLI::IsMember({1, 2}));

    auto* packet = app.add_subcommand("packet", "packets from one source of a merged family");
    rates_opt(packet, "one component per occurrence");
    common(packet);
    packet->add_option("--source", f.source, "1-based source index");
    packet->add_option("--b", f.b, "total packet count for the conditional law")->check(CLI::NonNegativeNumber);
    packet->add_option("--n-max", f.n_max, "print the joint pmf for n <= n-max");

    auto* simulate = app.add_subcommand("simulate", "sample paths or their empirical distribution");
    rates_opt(simulate, "jump rates");
    common(simulate);
    simulate->add_option("--paths", f.paths, "number of paths")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    simulate->add_option("--seed", f.seed, "master seed");
    simulate->add_flag("--summary", f.summary, "print the histogram of M(t) instead of paths");

    auto* verify = app.add_subcommand("verify", "run verification suites; exit 0 iff every check passes");
    common(verify);
    verify->add_option("--suite", f.suite, "suite name")->check(CLI::IsMember(gcp::suite_names()));
    verify->add_option("--seed", f.seed, "master seed");
    verify->add_option("--replications", f.replications, "Monte Carlo replications per check")
        ->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));

    auto* scenario = app.add_subcommand("scenario", "fishing or hotel expectations");
    scenario->add_option("name", f.scenario, "fishing | hotel")->required()->check(CLI::IsMember({"fishing", "hotel"}));
    rates_opt(scenario, "fishing: one fish type per occurrence; hotel: booking rates");
    common(scenario);
    scenario->add_option("--b", f.b, "fishing: total catch events")->check(CLI::NonNegativeNumber);
    scenario->add_option("--p", f.p, "hotel: room-type probabilities");
    scenario->add_option("--caps", f.caps, "hotel: maximum rooms per booking of each type");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*pmf) return cmd_pmf(f);
        if (*pgf) return cmd_pgf(f);
        if (*moments) return cmd_moments(f);
        if (*merge) return cmd_merge(f);
        if (*origin) return cmd_origin(f);
        if (*split) return cmd_split(f);
        if (*packet) return cmd_packet(f);
        if (*simulate) return cmd_simulate(f);
        if (*verify) return cmd_verify(f);
        if (*scenario) return cmd_scenario(f);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
