#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gcp/counting.hpp"

using gcp::RateVector;

namespace {

double poisson(double mu, long long n) {
    double p = std::exp(-mu);
    for (long long i = 1; i <= n; ++i) p *= mu / static_cast<double>(i);
    return p;
}

// Every x with x_j <= n / j, kept when sum j x_j = n.
std::vector<gcp::PartitionIndex> brute_partitions(std::size_t k, std::size_t n) {
    std::vector<gcp::PartitionIndex> out;
    gcp::PartitionIndex x(k, 0);
    while (true) {
        std::size_t s = 0;
        for (std::size_t j = 0; j < k; ++j) s += (j + 1) * x[j];
        if (s == n) out.push_back(x);
        std::size_t pos = k;
        while (pos-- > 0) {
            if ((x[pos] + 1) * (pos + 1) <= n) {
                ++x[pos];
                break;
            }
            x[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

RateVector random_rates(std::mt19937_64& gen, std::size_t k) {
    std::uniform_real_distribution<double> d(0.05, 2.0);
    std::vector<double> r(k);
    for (double& v : r) v = d(gen);
    return RateVector(std::move(r));
}

}  // namespace

TEST(RateVector, RejectsBrokenProfiles) {
    EXPECT_THROW(RateVector(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW((RateVector{0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW((RateVector{1.0, -1.0}), std::invalid_argument);
    EXPECT_THROW((RateVector{1.0, NAN}), std::invalid_argument);
    EXPECT_THROW(RateVector::parse("1,,2"), std::invalid_argument);
    EXPECT_THROW(RateVector::parse("1,x"), std::invalid_argument);
    EXPECT_EQ(RateVector::parse("1,2.5").rate(2), 2.5);
    EXPECT_EQ((RateVector{1.0, 2.0}).rate(7), 0.0);
    EXPECT_EQ((RateVector{1.0, 2.0}).padded(4).k(), 4u);
}

TEST(Partitions, SmallExamples) {
    EXPECT_EQ(gcp::enumerate_partitions(3, 0), (std::vector<gcp::PartitionIndex>{{0, 0, 0}}));
    EXPECT_EQ(gcp::enumerate_partitions(2, 2), (std::vector<gcp::PartitionIndex>{{0, 1}, {2, 0}}));
    EXPECT_EQ(gcp::enumerate_partitions(1, 4), (std::vector<gcp::PartitionIndex>{{4}}));
}

TEST(Partitions, MatchExhaustiveSearch) {
    for (std::size_t k = 1; k <= 5; ++k) {
        for (std::size_t n = 0; n <= 14; ++n) {
            EXPECT_EQ(gcp::enumerate_partitions(k, n), brute_partitions(k, n)) << "k=" << k << " n=" << n;
        }
    }
}

TEST(Pmf, Examples) {
    EXPECT_NEAR(gcp::pmf_enumerated(RateVector{1.0}, 0, 1.0), 0.3678794412, 1e-10);
    EXPECT_NEAR(gcp::pmf_enumerated(RateVector{1.0, 2.0}, 2, 0.5), 1.125 * std::exp(-1.5), 1e-15);
    const RateVector r{0.3, 1.1, 0.7};
    EXPECT_NEAR(gcp::pmf_enumerated(r, 0, 1.7), std::exp(-r.total() * 1.7), 1e-16);
    EXPECT_THROW(gcp::pmf_enumerated(r, -1, 1.0), std::invalid_argument);
    EXPECT_THROW(gcp::pmf_enumerated(r, 1, -1.0), std::invalid_argument);
    EXPECT_THROW(gcp::pmf_recurrence(r, 3, -0.1), std::invalid_argument);
}

TEST(Pmf, PoissonReduction) {
    for (double t : {0.5, 1.0, 2.0, 3.5}) {
        for (long long n = 0; n <= 50; ++n) {
            EXPECT_NEAR(gcp::pmf_enumerated(RateVector{1.0}, n, t), poisson(t, n), 1e-12);
        }
        const auto rec = gcp::pmf_recurrence(RateVector{1.0}, 50, t);
        for (long long n = 0; n <= 50; ++n) EXPECT_NEAR(rec[n], poisson(t, n), 1e-12);
    }
}

TEST(Pmf, RecurrenceMatchesEnumeration) {
    std::mt19937_64 gen(7);
    for (std::size_t k = 1; k <= 5; ++k) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto rates = random_rates(gen, k);
            for (double t : {0.0, 0.1, 1.0, 2.5, 5.0}) {
                const auto rec = gcp::pmf_recurrence(rates, 30, t);
                for (long long n = 0; n <= 30; ++n) {
                    ASSERT_NEAR(rec[n], gcp::pmf_enumerated(rates, n, t), 1e-10) << "k=" << k << " t=" << t;
                    ASSERT_GE(rec[n], 0.0);
                    ASSERT_LE(rec[n], 1.0);
                }
            }
        }
    }
}

TEST(Pmf, LogSpaceRegime) {
    // Lambda t = 120, so the plain recursion would start from e^{-120}.
    const RateVector r{20.0, 10.0};
    const auto rec = gcp::pmf_recurrence(r, 450, 4.0);
    for (long long n : {0, 50, 100, 130, 160}) {
        EXPECT_NEAR(rec[n], gcp::pmf_enumerated(r, n, 4.0), 1e-12 + 1e-9 * rec[n]) << n;
    }
    double total = 0.0;
    for (double v : rec) total += v;
    EXPECT_NEAR(total, 1.0, 1e-9);

    const auto big = gcp::pmf_recurrence(RateVector{500.0}, 1200, 2.0);
    const double log_mode = 1000.0 * std::log(1000.0) - 1000.0 - std::lgamma(1001.0);
    EXPECT_NEAR(big[1000], std::exp(log_mode), 1e-12);
}

TEST(Pmf, ZeroTime) {
    const auto rec = gcp::pmf_recurrence(RateVector{1.0, 2.0}, 4, 0.0);
    EXPECT_EQ(rec, (std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0}));
}

TEST(Pgf, ClosedFormAndSeries) {
    const RateVector r{1.0, 2.0, 0.5};
    EXPECT_DOUBLE_EQ(gcp::pgf(r, 1.0, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(gcp::pgf(r, 0.0, 2.0), std::exp(-r.total() * 2.0));
    EXPECT_THROW(gcp::pgf(r, 1.01, 1.0), std::invalid_argument);
    EXPECT_THROW(gcp::pgf(r, -1.5, 1.0), std::invalid_argument);
    for (double t : {0.3, 1.0, 3.0}) {
        const auto p = gcp::pmf_recurrence(r, gcp::truncation_point(r, t, 1e-13), t);
        for (double u : {-1.0, -0.6, 0.2, 0.8, 1.0}) {
            double s = 0.0;
            double un = 1.0;
            for (double v : p) {
                s += un * v;
                un *= u;
            }
            EXPECT_NEAR(s, gcp::pgf(r, u, t), 1e-12);
        }
    }
}

TEST(Moments, ClosedForms) {
    const RateVector r{1.0, 2.0};
    EXPECT_DOUBLE_EQ(gcp::mean(r, 2.0), 10.0);
    EXPECT_DOUBLE_EQ(gcp::variance(r, 2.0), 18.0);
    EXPECT_EQ(gcp::mean(r, 0.0), 0.0);
    EXPECT_EQ(gcp::variance(r, 0.0), 0.0);
}

TEST(Moments, MatchPmfSums) {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 5; ++rep) {
        const auto r = random_rates(gen, 1 + rep % 4);
        const double t = 0.5 + rep;
        const auto p = gcp::pmf_recurrence(r, gcp::truncation_point(r, t, 1e-14), t);
        double m1 = 0.0;
        double m2 = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n) {
            m1 += n * p[n];
            m2 += double(n) * n * p[n];
        }
        EXPECT_NEAR(m1, gcp::mean(r, t), 1e-9 * gcp::mean(r, t));
        EXPECT_NEAR(m2 - m1 * m1, gcp::variance(r, t), 1e-8 * gcp::variance(r, t));
    }
}

TEST(Truncation, TailBoundIsValid) {
    const RateVector r{1.0, 2.0, 0.4};
    for (double t : {0.2, 1.0, 4.0}) {
        const auto p = gcp::pmf_recurrence(r, 400, t);
        for (std::size_t n : {1u, 5u, 10u, 20u, 40u}) {
            double tail = 0.0;
            for (std::size_t m = n; m < p.size(); ++m) tail += p[m];
            EXPECT_LE(tail, gcp::upper_tail_bound(r, t, n) * (1 + 1e-12) + 1e-300);
        }
        for (double eps : {1e-6, 1e-9, 1e-12}) {
            const std::size_t N = gcp::truncation_point(r, t, eps);
            double head = 0.0;
            for (std::size_t m = 0; m <= N; ++m) head += p[m];
            EXPECT_LT(1.0 - head, eps + 1e-15);
            EXPECT_GE(gcp::upper_tail_bound(r, t, N), eps);
        }
    }
    EXPECT_EQ(gcp::truncation_point(r, 0.0, 1e-12), 0u);
}

TEST(Normalization, PartialSumsApproachOne) {
    const RateVector r{0.7, 0.2, 1.3, 0.0, 0.4};
    for (double t : {0.1, 1.0, 5.0, 20.0}) {
        const auto p = gcp::pmf_recurrence(r, gcp::truncation_point(r, t, 1e-10), t);
        double s = 0.0;
        for (double v : p) s += v;
        EXPECT_NEAR(s, 1.0, 1e-9) << t;
    }
}

TEST(Pgf, DerivativeAtOneIsMean) {
    const RateVector r{1.0, 2.0, 3.0};
    for (double t : {0.5, 2.0}) {
        const double h = 1e-6;
        const double d = (3 * gcp::pgf(r, 1.0, t) - 4 * gcp::pgf(r, 1 - h, t) + gcp::pgf(r, 1 - 2 * h, t)) / (2 * h);
        EXPECT_NEAR(d, gcp::mean(r, t), 1e-5 * gcp::mean(r, t));
    }
}
