#pragma once

// Exact distribution of a single generalized counting process M(t): jumps of
// size j arrive at rate lambda_j, j = 1..k.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gcp/rate_vector.hpp"

namespace gcp {

/// Multiplicities (x_1..x_k) of size-j jumps; sum_j j * x_j is the count it indexes.
using PartitionIndex = std::vector<std::uint32_t>;

/// All solutions of sum_j j*x_j = n with x_j >= 0, lexicographic in x.
std::vector<PartitionIndex> enumerate_partitions(std::size_t k, std::size_t n);

/// p(n, t) as the sum over enumerate_partitions(k, n) of prod_j Poisson(x_j; lambda_j t).
/// Exponential in n; used as the reference oracle.
double pmf_enumerated(const RateVector& rates, long long n, double t);

/// p(0..n_max, t) by the recurrence n p(n) = t sum_j j lambda_j p(n - j).
/// Switches to log-space accumulation when Lambda t > 50.
std::vector<double> pmf_recurrence(const RateVector& rates, std::size_t n_max, double t);

/// E[u^M(t)] = exp(-sum_j lambda_j (1 - u^j) t), |u| <= 1.
double pgf(const RateVector& rates, double u, double t);

double mean(const RateVector& rates, double t);
double variance(const RateVector& rates, double t);

/// Chernoff bound on Pr{M(t) >= n}: inf over theta > 0 of G(e^theta) e^{-theta n}.
double upper_tail_bound(const RateVector& rates, double t, std::size_t n);

/// Smallest N with upper_tail_bound(N + 1) < eps, so truncating a series at
/// N leaves a tail of mass below eps.
std::size_t truncation_point(const RateVector& rates, double t, double eps);

}  // namespace gcp
