#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gcp/counting.hpp"
#include "gcp/superpose.hpp"

using gcp::MergeFamily;
using gcp::RateVector;

namespace {

// Merged rates the long way: sort the components by k, group equal k
// (k_(1) < ... < k_(l), multiplicities d_m), and for k_(m-1) < j <= k_(m) sum
// only the components with k_i >= k_(m), i.e. the sorted suffix from r_m on.
std::vector<double> piecewise_beta(std::vector<RateVector> parts) {
    std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.k() < b.k(); });
    std::vector<std::size_t> levels;
    std::vector<std::size_t> first_index;  // r_m, 0-based
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (levels.empty() || parts[i].k() != levels.back()) {
            levels.push_back(parts[i].k());
            first_index.push_back(i);
        }
    }
    std::vector<double> beta(levels.back(), 0.0);
    std::size_t lower = 0;
    for (std::size_t m = 0; m < levels.size(); ++m) {
        for (std::size_t j = lower + 1; j <= levels[m]; ++j) {
            for (std::size_t i = first_index[m]; i < parts.size(); ++i) beta[j - 1] += parts[i].rates()[j - 1];
        }
        lower = levels[m];
    }
    return beta;
}

RateVector random_rates(std::mt19937_64& gen, std::size_t k) {
    std::uniform_real_distribution<double> d(0.05, 3.0);
    std::vector<double> r(k);
    for (double& v : r) v = d(gen);
    return RateVector(std::move(r));
}

}  // namespace

TEST(Merge, Examples) {
    const RateVector lambda{1.0, 2.0};
    const RateVector mu{3.0, 4.0, 5.0};
    EXPECT_EQ(gcp::merge(MergeFamily({lambda, mu})), (RateVector{4.0, 6.0, 5.0}));
    EXPECT_EQ(gcp::merge(MergeFamily({mu})), mu);
    EXPECT_EQ(gcp::merge(MergeFamily({lambda, RateVector{0.5, 0.25}})), (RateVector{1.5, 2.25}));
    EXPECT_THROW(MergeFamily(std::vector<RateVector>{}), std::invalid_argument);
    EXPECT_THROW(MergeFamily({lambda}).component(2), std::out_of_range);
}

TEST(Merge, AgreesWithPiecewiseOrderStatisticForm) {
    std::mt19937_64 gen(3);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t q = 1 + gen() % 5;
        std::vector<RateVector> parts;
        for (std::size_t i = 0; i < q; ++i) parts.push_back(random_rates(gen, 1 + gen() % 6));
        const auto beta = gcp::merge(MergeFamily(parts));
        const auto expected = piecewise_beta(parts);
        ASSERT_EQ(beta.k(), expected.size());
        for (std::size_t j = 0; j < expected.size(); ++j) EXPECT_NEAR(beta.rates()[j], expected[j], 1e-13);
    }
}

TEST(Merge, AssociativeAndCommutative) {
    const RateVector a{1.0, 2.0};
    const RateVector b{3.0, 4.0, 5.0};
    const RateVector c{0.5};
    const auto abc = gcp::merge(MergeFamily({a, b, c}));
    EXPECT_EQ(gcp::merge(MergeFamily({gcp::merge(MergeFamily({a, b})), c})), abc);
    EXPECT_EQ(gcp::merge(MergeFamily({a, gcp::merge(MergeFamily({b, c}))})), abc);
    EXPECT_EQ(gcp::merge(MergeFamily({c, b, a})), abc);
}

TEST(Merge, MeanIsAdditive) {
    const RateVector a{1.0, 2.0};
    const RateVector b{3.0, 4.0, 5.0};
    const double t = 1.7;
    EXPECT_DOUBLE_EQ(gcp::mean(gcp::merge(MergeFamily({a, b})), t), gcp::mean(a, t) + gcp::mean(b, t));
}

TEST(Merge, PmfEqualsConvolution) {
    std::mt19937_64 gen(5);
    std::vector<MergeFamily> families{MergeFamily({RateVector{1.0, 2.0}, RateVector{3.0, 4.0, 5.0}}),
                                      MergeFamily({RateVector{1.0}, RateVector{2.5}})};
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<RateVector> parts;
        for (std::size_t i = 0; i < 1 + gen() % 3; ++i) parts.push_back(random_rates(gen, 1 + gen() % 3));
        families.emplace_back(parts);
    }
    for (const auto& family : families) {
        for (double t : {0.0, 0.7, 2.0}) {
            for (long long n = 0; n <= 20; ++n) {
                const auto [merged, conv] = gcp::merged_pmf_check(family, n, t);
                EXPECT_NEAR(merged, conv, 1e-10);
            }
        }
    }
    // Two Poisson components give Poisson(lambda + mu).
    const auto [m, c] = gcp::merged_pmf_check(families[1], 3, 1.0);
    const double mu = 3.5;
    EXPECT_NEAR(m, std::exp(-mu) * mu * mu * mu / 6.0, 1e-14);
    EXPECT_NEAR(c, std::exp(-mu) * mu * mu * mu / 6.0, 1e-14);
}

TEST(Origin, Examples) {
    const MergeFamily f({RateVector{1.0, 2.0}, RateVector{3.0, 4.0, 5.0}});
    EXPECT_DOUBLE_EQ(gcp::origin_probability(f, 1, 1), 0.25);
    EXPECT_DOUBLE_EQ(gcp::origin_probability(f, 1, 2), 1.0 / 3.0);
    EXPECT_EQ(gcp::origin_probability(f, 1, 3), 0.0);
    EXPECT_EQ(gcp::origin_probability(f, 2, 3), 1.0);
    EXPECT_THROW(gcp::origin_probability(f, 3, 1), std::out_of_range);
    EXPECT_THROW(gcp::origin_probability(f, 1, 4), std::out_of_range);

    const MergeFamily gap({RateVector{1.0, 0.0, 2.0}, RateVector{1.0}});
    EXPECT_THROW(gcp::origin_probability(gap, 1, 2), std::domain_error);
}

TEST(Origin, NormalizedAndSymmetric) {
    std::mt19937_64 gen(9);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<RateVector> parts;
        const std::size_t q = 1 + gen() % 4;
        for (std::size_t i = 0; i < q; ++i) parts.push_back(random_rates(gen, 1 + gen() % 4));
        const MergeFamily f(parts);
        for (std::size_t j = 1; j <= f.k_max(); ++j) {
            double s = 0.0;
            for (std::size_t src = 1; src <= q; ++src) s += gcp::origin_probability(f, src, j);
            EXPECT_NEAR(s, 1.0, 1e-15);
        }
    }
    const RateVector r{0.3, 0.9};
    const MergeFamily same({r, r, r});
    for (std::size_t j = 1; j <= 2; ++j) EXPECT_DOUBLE_EQ(gcp::origin_probability(same, 2, j), 1.0 / 3.0);
}

TEST(Countable, GeometricFamilies) {
    gcp::CountableFamily geo{4, [](std::size_t i) { return RateVector(std::vector<double>(4, std::ldexp(1.0, -int(i)))); },
                             [](std::size_t, std::size_t n) { return std::ldexp(1.0, -int(n)); }, {}};
    const auto r = gcp::merge_countable(geo, 1e-10);
    ASSERT_TRUE(std::holds_alternative<RateVector>(r));
    for (double b : std::get<RateVector>(r).rates()) EXPECT_NEAR(b, 1.0, 1e-10);

    gcp::CountableFamily scaled{3,
                                [](std::size_t i) {
                                    return RateVector{std::pow(3.0, -double(i)), 2 * std::pow(3.0, -double(i)),
                                                      3 * std::pow(3.0, -double(i))};
                                },
                                [](std::size_t j, std::size_t n) { return j * std::pow(3.0, -double(n)) / 2; }, {}};
    const auto s = gcp::merge_countable(scaled, 1e-9);
    ASSERT_TRUE(std::holds_alternative<RateVector>(s));
    for (std::size_t j = 1; j <= 3; ++j) EXPECT_NEAR(std::get<RateVector>(s).rate(j), j / 2.0, 1e-9);
}

TEST(Countable, DivergentAndUncertified) {
    gcp::CountableFamily harmonic{1, [](std::size_t i) { return RateVector{1.0 / double(i)}; },
                                  [](std::size_t, std::size_t) { return INFINITY; }, [](std::size_t j) { return j == 1; }};
    const auto h = gcp::merge_countable(harmonic, 1e-6);
    ASSERT_TRUE(std::holds_alternative<gcp::Divergent>(h));
    EXPECT_EQ(std::get<gcp::Divergent>(h).j, 1u);

    gcp::CountableFamily slow{1, [](std::size_t i) { return RateVector{1.0 / (double(i) * i)}; },
                              [](std::size_t, std::size_t n) { return 1.0 / double(n); }, {}};
    EXPECT_TRUE(std::holds_alternative<gcp::NotCertified>(gcp::merge_countable(slow, 1e-12, 1 << 12)));

    gcp::CountableFamily too_wide{1, [](std::size_t i) { return RateVector{0.0, std::ldexp(1.0, -int(i))}; },
                                  [](std::size_t, std::size_t n) { return std::ldexp(1.0, -int(n)); }, {}};
    EXPECT_THROW(gcp::merge_countable(too_wide, 1e-6), std::invalid_argument);
    EXPECT_THROW(gcp::merge_countable(slow, 0.0), std::invalid_argument);
}
