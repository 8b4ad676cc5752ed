#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace hawkes {

namespace {

void check_cap(std::size_t n) {
    if (n > kEventCap) {
        throw std::runtime_error("simulation: event cap exceeded (near-critical parameters?)");
    }
}

} // namespace

std::vector<double> simulate_single_cluster(const KernelParams& params, double root_time,
                                            SplitRng& rng) {
    params.validate_allow_zero_a();
    std::vector<double> events;
    if (root_time > params.t) return events;
    const double branching = params.a / params.b;
    events.push_back(root_time);
    std::size_t cursor = events.size() - 1;
    while (cursor < events.size()) {
        const double parent = events[cursor++];
        const std::uint64_t children = rng.poisson(branching);
        for (std::uint64_t c = 0; c < children; ++c) {
            const double child = parent + rng.exponential(params.b);
            if (child <= params.t) {
                events.push_back(child);
                check_cap(events.size());
            }
        }
    }
    std::sort(events.begin(), events.end());
    return events;
}

std::vector<double> simulate_cluster(const KernelParams& params, SplitRng& rng) {
    params.validate_allow_zero_a();
    std::vector<double> events;
    if (params.t <= 0.0) return events;
    const std::uint64_t immigrants = rng.poisson(params.nu * params.t);
    check_cap(immigrants);
    for (std::uint64_t k = 0; k < immigrants; ++k) {
        events.push_back(params.t * rng.uniform01());
    }
    const double branching = params.a / params.b;
    std::size_t cursor = 0;
    while (cursor < events.size()) {
        const double parent = events[cursor++];
        const std::uint64_t children = rng.poisson(branching);
        for (std::uint64_t c = 0; c < children; ++c) {
            const double child = parent + rng.exponential(params.b);
            if (child <= params.t) {
                events.push_back(child);
                check_cap(events.size());
            }
        }
    }
    std::sort(events.begin(), events.end());
    return events;
}

std::vector<double> simulate_thinning(const KernelParams& params, SplitRng& rng) {
    params.validate_allow_zero_a();
    std::vector<double> events;
    if (params.t <= 0.0) return events;
    double now = 0.0;
    double excitation = 0.0; // a * sum exp(-b (now - s_i))
    while (true) {
        const double bound = params.nu + excitation;
        if (bound <= 0.0) break;
        const double wait = rng.exponential(bound);
        now += wait;
        if (now > params.t) break;
        excitation *= std::exp(-params.b * wait);
        if (rng.uniform01() * bound <= params.nu + excitation) {
            events.push_back(now);
            check_cap(events.size());
            excitation += params.a;
        }
    }
    return events; // generated in increasing time order
}

PathPoint evaluate_path(std::span<const double> events, double t_eval,
                        const KernelParams& params) {
    if (t_eval > params.t + 1e-12) {
        throw std::invalid_argument("evaluate_path: t_eval beyond the simulated horizon");
    }
    PathPoint out;
    double sum = 0.0;
    for (const double s : events) {
        if (s > t_eval) break;
        ++out.count;
        sum += std::exp(-params.b * (t_eval - s));
    }
    out.intensity = params.a * sum;
    return out;
}

namespace {

struct KStats {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
};

KStats kstats_from_power_sums(long double n, long double s1, long double s2, long double s3,
                              long double s4) {
    const long double mean = s1 / n;
    const long double m2 = s2 / n - mean * mean;
    const long double m3 = s3 / n - 3.0L * mean * s2 / n + 2.0L * mean * mean * mean;
    const long double m4 = s4 / n - 4.0L * mean * s3 / n + 6.0L * mean * mean * s2 / n -
                           3.0L * mean * mean * mean * mean;
    KStats k;
    k.k1 = static_cast<double>(mean);
    k.k2 = static_cast<double>(n / (n - 1.0L) * m2);
    k.k3 = static_cast<double>(n * n / ((n - 1.0L) * (n - 2.0L)) * m3);
    k.k4 = static_cast<double>(n * n *
                               ((n + 1.0L) * m4 - 3.0L * (n - 1.0L) * m2 * m2) /
                               ((n - 1.0L) * (n - 2.0L) * (n - 3.0L)));
    return k;
}

double batch_se(std::span<const double> batch_values) {
    const std::size_t nb = batch_values.size();
    double mean = 0.0;
    for (const double v : batch_values) mean += v;
    mean /= static_cast<double>(nb);
    double var = 0.0;
    for (const double v : batch_values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(nb - 1);
    return std::sqrt(var / static_cast<double>(nb));
}

// per-batch, per-grid-time accumulators
struct BatchAcc {
    long double c1 = 0, c2 = 0, c3 = 0, c4 = 0; // count power sums
    long double lam = 0;                         // intensity sum
    long double joint = 0;                       // lambda * N sum
};

} // namespace

std::array<double, 4> k_statistics(std::span<const double> values) {
    if (values.size() < 4) {
        throw std::invalid_argument("k_statistics: need at least 4 values");
    }
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (const double v : values) {
        const long double x = v;
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
    }
    const KStats k =
        kstats_from_power_sums(static_cast<long double>(values.size()), s1, s2, s3, s4);
    return {k.k1, k.k2, k.k3, k.k4};
}

SampleStats run_simulation(const SimConfig& config) {
    config.params.validate_allow_zero_a();
    if (config.t_grid.empty()) {
        throw std::invalid_argument("run_simulation: empty t_grid");
    }
    if (!std::is_sorted(config.t_grid.begin(), config.t_grid.end())) {
        throw std::invalid_argument("run_simulation: t_grid must be ascending");
    }
    if (config.t_grid.front() < 0.0 || config.t_grid.back() > config.params.t + 1e-12) {
        throw std::invalid_argument("run_simulation: t_grid must lie within [0, t]");
    }
    if (config.samples < 4) {
        throw std::invalid_argument("run_simulation: k-statistics need at least 4 samples");
    }

    const std::size_t ngrid = config.t_grid.size();
    const std::uint64_t samples = config.samples;
    // up to 32 equal batches, but k-statistics need 4 values per batch
    const int nb = static_cast<int>(std::clamp<std::uint64_t>(samples / 4, 1, 32));

    int threads = config.max_threads;
    if (threads <= 0) {
        if (const char* env = std::getenv("HAWKES_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
    }
    threads = std::clamp(threads, 1, nb);

    std::vector<std::vector<BatchAcc>> acc(
        static_cast<std::size_t>(nb), std::vector<BatchAcc>(ngrid));

    const auto run_batch = [&](int batch) {
        const std::uint64_t lo = samples * static_cast<std::uint64_t>(batch) /
                                 static_cast<std::uint64_t>(nb);
        const std::uint64_t hi = samples * (static_cast<std::uint64_t>(batch) + 1) /
                                 static_cast<std::uint64_t>(nb);
        auto& rows = acc[static_cast<std::size_t>(batch)];
        for (std::uint64_t rep = lo; rep < hi; ++rep) {
            SplitRng rng(config.seed, rep);
            const std::vector<double> events = config.method == SimMethod::cluster
                                                   ? simulate_cluster(config.params, rng)
                                                   : simulate_thinning(config.params, rng);
            // incremental sweep over the grid: counts and decayed excitation
            double lambda = 0.0;
            double prev_t = 0.0;
            std::size_t pos = 0;
            for (std::size_t gidx = 0; gidx < ngrid; ++gidx) {
                const double tau = config.t_grid[gidx];
                lambda *= std::exp(-config.params.b * (tau - prev_t));
                while (pos < events.size() && events[pos] <= tau) {
                    lambda += config.params.a * std::exp(-config.params.b * (tau - events[pos]));
                    ++pos;
                }
                prev_t = tau;
                const long double n = static_cast<long double>(pos);
                BatchAcc& row = rows[gidx];
                row.c1 += n;
                row.c2 += n * n;
                row.c3 += n * n * n;
                row.c4 += n * n * n * n;
                row.lam += lambda;
                row.joint += lambda * static_cast<double>(pos);
            }
        }
    };

    if (threads == 1) {
        for (int b = 0; b < nb; ++b) run_batch(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (int b = w; b < nb; b += threads) run_batch(b);
            });
        }
        for (auto& th : pool) th.join();
    }

    SampleStats stats;
    stats.samples = samples;
    stats.batches = nb;
    stats.grid.resize(ngrid);

    std::vector<double> batch_stat(static_cast<std::size_t>(nb));
    for (std::size_t gidx = 0; gidx < ngrid; ++gidx) {
        GridPointStats& out = stats.grid[gidx];
        out.t = config.t_grid[gidx];

        long double c1 = 0, c2 = 0, c3 = 0, c4 = 0, lam = 0, joint = 0;
        for (int b = 0; b < nb; ++b) {
            const BatchAcc& row = acc[static_cast<std::size_t>(b)][gidx];
            c1 += row.c1;
            c2 += row.c2;
            c3 += row.c3;
            c4 += row.c4;
            lam += row.lam;
            joint += row.joint;
        }
        const long double n = static_cast<long double>(samples);
        const KStats k = kstats_from_power_sums(n, c1, c2, c3, c4);
        out.count_kstats = {k.k1, k.k2, k.k3, k.k4};
        out.intensity_mean = static_cast<double>(lam / n);
        out.joint_mean = static_cast<double>(joint / n);
        if (k.k2 > 0.0) {
            out.skewness = k.k3 / std::pow(k.k2, 1.5);
            out.excess_kurtosis = k.k4 / (k.k2 * k.k2);
        }

        // batch-means standard errors; the global estimate stays full-sample
        const auto se_of = [&](auto&& per_batch) {
            if (nb < 2) return 0.0; // no dispersion to estimate from one batch
            for (int b = 0; b < nb; ++b) {
                batch_stat[static_cast<std::size_t>(b)] = per_batch(b);
            }
            return batch_se(batch_stat);
        };
        std::vector<KStats> bks(static_cast<std::size_t>(nb));
        for (int b = 0; b < nb; ++b) {
            const std::uint64_t lo = samples * static_cast<std::uint64_t>(b) /
                                     static_cast<std::uint64_t>(nb);
            const std::uint64_t hi = samples * (static_cast<std::uint64_t>(b) + 1) /
                                     static_cast<std::uint64_t>(nb);
            const BatchAcc& row = acc[static_cast<std::size_t>(b)][gidx];
            bks[static_cast<std::size_t>(b)] = kstats_from_power_sums(
                static_cast<long double>(hi - lo), row.c1, row.c2, row.c3, row.c4);
        }
        out.std_errors[0] = se_of([&](int b) { return bks[static_cast<std::size_t>(b)].k1; });
        out.std_errors[1] = se_of([&](int b) { return bks[static_cast<std::size_t>(b)].k2; });
        out.std_errors[2] = se_of([&](int b) { return bks[static_cast<std::size_t>(b)].k3; });
        out.std_errors[3] = se_of([&](int b) { return bks[static_cast<std::size_t>(b)].k4; });
        out.std_errors[4] = se_of([&](int b) {
            const std::uint64_t lo = samples * static_cast<std::uint64_t>(b) /
                                     static_cast<std::uint64_t>(nb);
            const std::uint64_t hi = samples * (static_cast<std::uint64_t>(b) + 1) /
                                     static_cast<std::uint64_t>(nb);
            return static_cast<double>(acc[static_cast<std::size_t>(b)][gidx].lam /
                                       static_cast<long double>(hi - lo));
        });
        out.std_errors[5] = se_of([&](int b) {
            const std::uint64_t lo = samples * static_cast<std::uint64_t>(b) /
                                     static_cast<std::uint64_t>(nb);
            const std::uint64_t hi = samples * (static_cast<std::uint64_t>(b) + 1) /
                                     static_cast<std::uint64_t>(nb);
            return static_cast<double>(acc[static_cast<std::size_t>(b)][gidx].joint /
                                       static_cast<long double>(hi - lo));
        });
        out.se_skewness = se_of([&](int b) {
            const KStats& kb = bks[static_cast<std::size_t>(b)];
            return kb.k2 > 0.0 ? kb.k3 / std::pow(kb.k2, 1.5) : 0.0;
        });
        out.se_excess_kurtosis = se_of([&](int b) {
            const KStats& kb = bks[static_cast<std::size_t>(b)];
            return kb.k2 > 0.0 ? kb.k4 / (kb.k2 * kb.k2) : 0.0;
        });
    }
    return stats;
}

} // namespace hawkes
