#pragma once

// Bivariate process (A_i(t), M(t)): packets registered from one designated
// source of a merged family, together with the merged count.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gcp/superpose.hpp"

namespace gcp {

class PacketModel {
public:
    /// source is 1-based; the source must have positive total rate.
    PacketModel(MergeFamily family, std::size_t source);

    const MergeFamily& family() const noexcept { return family_; }
    std::size_t source() const noexcept { return source_; }
    const RateVector& source_rates() const { return family_.component(source_); }
    /// lambda^(i) = sum_j lambda_j^(i).
    double source_total() const noexcept { return source_total_; }
    /// Lambda = sum over all components and amplitudes.
    double total() const noexcept { return total_; }
    /// nu_l = sum_{k != i} lambda_l^(k), l = 1..k_max.
    const std::vector<double>& other_rates() const noexcept { return other_rates_; }

private:
    MergeFamily family_;
    std::size_t source_;
    double source_total_ = 0.0;
    double total_ = 0.0;
    std::vector<double> other_rates_;
};

/// Pr{A_i(t) = a, M(t) = n}, by enumerating the (r, s) multiplicity vectors
/// with sum r_j = a and sum j r_j + sum l s_l = n.
double packet_joint_pmf(const PacketModel& model, long long a, long long n, double t);

/// Table p[n][a] for 0 <= a <= n <= n_max; same enumeration, shared work.
std::vector<std::vector<double>> packet_joint_pmf_table(const PacketModel& model, std::size_t n_max,
                                                        double t);

/// E[u^A v^M] = exp((-Lambda + sum_j lambda_j^(i) u v^j + sum_l nu_l v^l) t).
double packet_joint_pgf(const PacketModel& model, double u, double v, double t);

/// Pr{A_i = a | total packets = b}: Binomial(b, lambda^(i) / sum_j lambda^(j)).
/// Evaluated in log-space for b > 60.
double conditional_source_binomial(const PacketModel& model, long long a, long long b);

/// sum_j j lambda_j^(i) t.
double packet_covariance(const PacketModel& model, double t);
/// Time-independent correlation of A_i(t) and M(t).
double packet_correlation(const PacketModel& model);

/// Right side of the forward equation for p(a, n, t), 0 <= a <= n <= n_max,
/// flattened row-major by n then a.
std::vector<double> packet_master_rhs(const PacketModel& model,
                                      const std::vector<std::vector<double>>& table);

/// Max |d/dt p - rhs| on 0 <= a <= n <= n_max at time t, centred difference dt.
double packet_ode_residual(const PacketModel& model, std::size_t n_max, double t, double dt);

struct PacketSamples {
    std::vector<long long> packets;  // A_i(t)
    std::vector<long long> merged;   // M(t)
};

/// Simulates each component independently and superposes; replication r
/// uses SeedSpec{master_seed, r} with one lane per component.
PacketSamples simulate_packets(const PacketModel& model, double t, std::uint64_t master_seed,
                               std::size_t replications);

}  // namespace gcp
