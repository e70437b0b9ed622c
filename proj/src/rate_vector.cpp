#include "gcp/rate_vector.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gcp/format.hpp"

namespace gcp {

RateVector::RateVector(std::vector<double> rates) : rates_(std::move(rates)) {
    if (rates_.empty()) {
        throw std::invalid_argument("RateVector: k must be at least 1");
    }
    bool any_positive = false;
    for (std::size_t j = 0; j < rates_.size(); ++j) {
        const double r = rates_[j];
        if (!std::isfinite(r) || r < 0.0) {
            throw std::invalid_argument("RateVector: rate of size-" + std::to_string(j + 1) +
                                        " jumps must be finite and non-negative");
        }
        any_positive = any_positive || r > 0.0;
        total_ += r;
    }
    if (!any_positive) {
        throw std::invalid_argument("RateVector: at least one rate must be positive");
    }
    if (!std::isfinite(total_)) {
        throw std::invalid_argument("RateVector: total rate must be finite");
    }
}

RateVector::RateVector(std::initializer_list<double> rates)
    : RateVector(std::vector<double>(rates)) {}

RateVector RateVector::parse(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("RateVector: cannot parse rate '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) {
            throw std::invalid_argument("RateVector: cannot parse rate '" + item + "'");
        }
        values.push_back(v);
    }
    return RateVector(std::move(values));
}

double RateVector::rate(std::size_t j) const noexcept {
    if (j == 0 || j > rates_.size()) return 0.0;
    return rates_[j - 1];
}

RateVector RateVector::padded(std::size_t k) const {
    if (k < rates_.size()) {
        throw std::invalid_argument("RateVector::padded: cannot shrink below k");
    }
    std::vector<double> r = rates_;
    r.resize(k, 0.0);
    return RateVector(std::move(r));
}

std::string RateVector::to_string() const {
    return format_list(rates_);
}

}  // namespace gcp
