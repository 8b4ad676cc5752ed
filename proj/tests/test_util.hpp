#pragma once

#include "hawkes/simulate.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace test_util {

struct BatchedStat {
    double estimate = 0.0;
    double se = 0.0;
    double z(double reference) const { return (estimate - reference) / se; }
};

// k-statistics of the full sample plus 32-batch standard errors.
inline std::array<BatchedStat, 4> batched_kstats(std::span<const double> values) {
    const auto full = hawkes::k_statistics(values);
    const int nb = 32;
    const std::size_t n = values.size();
    std::array<std::vector<double>, 4> per_batch;
    for (auto& v : per_batch) v.reserve(nb);
    for (int b = 0; b < nb; ++b) {
        const std::size_t lo = n * static_cast<std::size_t>(b) / nb;
        const std::size_t hi = n * (static_cast<std::size_t>(b) + 1) / nb;
        const auto ks = hawkes::k_statistics(values.subspan(lo, hi - lo));
        for (int r = 0; r < 4; ++r) per_batch[static_cast<std::size_t>(r)].push_back(ks[static_cast<std::size_t>(r)]);
    }
    std::array<BatchedStat, 4> out;
    for (int r = 0; r < 4; ++r) {
        const auto& vals = per_batch[static_cast<std::size_t>(r)];
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= nb;
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= (nb - 1);
        out[static_cast<std::size_t>(r)] = {full[static_cast<std::size_t>(r)],
                                            std::sqrt(var / nb)};
    }
    return out;
}

} // namespace test_util
