#include "gcp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gcp {
namespace {

namespace pt = boost::property_tree;

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("config: cannot parse " + key + " = '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        out.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
    }
    return out;
}

void check_keys(const std::string& section, const pt::ptree& tree, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : tree) {
        if (!allowed.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "' in [" + section + "]");
    }
}

}  // namespace

const RateVector& ScenarioConfig::named(const std::string& name) const {
    for (const auto& [n, r] : rates) {
        if (n == name) return r;
    }
    throw std::invalid_argument("config: no rate profile named '" + name + "'");
}

MergeFamily ScenarioConfig::family() const {
    std::vector<RateVector> parts;
    if (components.empty()) {
        for (const auto& [n, r] : rates) parts.push_back(r);
    } else {
        for (const auto& name : components) parts.push_back(named(name));
    }
    if (parts.empty()) throw std::invalid_argument("config: merge family is empty");
    return MergeFamily(std::move(parts));
}

const RateVector& ScenarioConfig::split_profile() const {
    if (split_rates) return named(*split_rates);
    if (rates.size() == 1) return rates.front().second;
    throw std::invalid_argument("config: [split] rates must name a profile");
}

ScenarioConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ScenarioConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw std::invalid_argument("config: key '" + section + "' outside any section");
        }
        if (section == "general") {
            check_keys(section, body, {"seed", "t", "paths", "replications"});
            if (auto v = body.get_optional<std::string>("seed")) cfg.seed = parse_number<std::uint64_t>("seed", *v);
            if (auto v = body.get_optional<std::string>("t")) cfg.t = parse_number<double>("t", *v);
            if (auto v = body.get_optional<std::string>("paths")) cfg.paths = parse_number<std::size_t>("paths", *v);
            if (auto v = body.get_optional<std::string>("replications")) {
                cfg.replications = parse_number<std::size_t>("replications", *v);
            }
        } else if (section == "rates") {
            for (const auto& [name, value] : body) cfg.rates.emplace_back(name, RateVector::parse(value.data()));
        } else if (section == "merge") {
            check_keys(section, body, {"components", "source", "b"});
            if (auto v = body.get_optional<std::string>("components")) cfg.components = split_list(*v);
            if (auto v = body.get_optional<std::string>("source")) cfg.source = parse_number<std::size_t>("source", *v);
            if (auto v = body.get_optional<std::string>("b")) cfg.b = parse_number<long long>("b", *v);
        } else if (section == "split") {
            check_keys(section, body, {"rates", "p", "type", "caps"});
            if (auto v = body.get_optional<std::string>("rates")) cfg.split_rates = *v;
            if (auto v = body.get_optional<std::string>("p")) cfg.split = SplitSpec::parse(*v);
            if (auto v = body.get_optional<std::string>("type")) cfg.split_type = parse_number<int>("type", *v);
            if (auto v = body.get_optional<std::string>("caps")) {
                for (const auto& item : split_list(*v)) cfg.caps.push_back(parse_number<std::size_t>("caps", item));
            }
        } else {
            throw std::invalid_argument("config: unknown section [" + section + "]");
        }
    }
    if (!(cfg.t >= 0.0)) throw std::invalid_argument("config: t must be non-negative");
    if (cfg.split_type != 1 && cfg.split_type != 2) throw std::invalid_argument("config: split type must be 1 or 2");
    for (const auto& name : cfg.components) cfg.named(name);
    if (cfg.split_rates) cfg.named(*cfg.split_rates);
    if (cfg.split && !cfg.caps.empty() && cfg.caps.size() != cfg.split->q()) {
        throw std::invalid_argument("config: caps needs one entry per split component");
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return parse_config(in);
}

}  // namespace gcp
