#pragma once

#include "hawkes/exp_poly.hpp"
#include "hawkes/rng.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hawkes {

enum class SimMethod { cluster, thinning };

struct SimConfig {
    KernelParams params;
    std::vector<double> t_grid;      // evaluation times, ascending, within [0, t]
    std::uint64_t samples = 100'000; // independent replications, >= 4
    std::uint64_t seed = 1;
    SimMethod method = SimMethod::cluster;
    int max_threads = 0;             // 0: HAWKES_THREADS env var, else hardware
};

struct GridPointStats {
    double t = 0.0;
    std::array<double, 4> count_kstats{};  // unbiased k-statistics of N_t
    double intensity_mean = 0.0;           // E[lambda_t], excitation only
    double joint_mean = 0.0;               // E[lambda_t N_t]
    // batch standard errors for k1..k4, intensity_mean, joint_mean
    std::array<double, 6> std_errors{};
    // derived shape statistics with their own batch standard errors
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double se_skewness = 0.0;
    double se_excess_kurtosis = 0.0;
};

struct SampleStats {
    std::uint64_t samples = 0;
    int batches = 0;
    std::vector<GridPointStats> grid;
};

inline constexpr std::uint64_t kEventCap = 10'000'000;

// Poisson(nu t) immigrants uniform on [0, t]; each event spawns Poisson(a/b)
// children at Exponential(b) offsets; children beyond t are pruned (their
// descendants would lie beyond t as well). Returns sorted event times.
std::vector<double> simulate_cluster(const KernelParams& params, SplitRng& rng);

// Ogata thinning against the piecewise bound nu + current excitation.
// Distributionally identical to simulate_cluster; the tests cross-validate.
std::vector<double> simulate_thinning(const KernelParams& params, SplitRng& rng);

// The full cluster of one root at root_time, truncated to [0, t]; exposes the
// Borel total-progeny embedding for tests.
std::vector<double> simulate_single_cluster(const KernelParams& params, double root_time,
                                            SplitRng& rng);

struct PathPoint {
    std::int64_t count = 0;
    double intensity = 0.0;
};

// N_{t_eval} and lambda_{t_eval} = a * sum_{s <= t_eval} exp(-b (t_eval - s)).
PathPoint evaluate_path(std::span<const double> events, double t_eval,
                        const KernelParams& params);

// Unbiased cumulant estimators k1..k4 (needs at least 4 values).
std::array<double, 4> k_statistics(std::span<const double> values);

// Runs config.samples replications on per-replication random streams and
// aggregates k-statistics, E[lambda_t] and E[lambda_t N_t] per grid time,
// with standard errors from up to 32 equal batches. Batch-owned sequential
// accumulation plus a fixed-order reduction makes the result bit-identical
// for any thread count.
SampleStats run_simulation(const SimConfig& config);

} // namespace hawkes
