#include "hawkes/bell.hpp"

#include <cmath>

namespace hawkes {

std::vector<double> moments_from_cumulants(std::span<const double> kappas) {
    const int n = static_cast<int>(kappas.size());
    if (n < 1 || n > 12) {
        throw std::invalid_argument("moments_from_cumulants: order must be in [1, 12]");
    }
    std::vector<double> moments(kappas.size(), 0.0);
    for (int j = 1; j <= n; ++j) {
        long double mj = 0.0L; // the partition sums cancel heavily at high order
        for_each_partition(j, [&](const SetPartition& p) {
            long double prod = 1.0L;
            for (const auto& block : p.blocks) prod *= kappas[block.size() - 1];
            mj += prod;
        });
        moments[static_cast<std::size_t>(j - 1)] = static_cast<double>(mj);
    }
    return moments;
}

std::vector<double> cumulants_from_moments(std::span<const double> moments) {
    const int n = static_cast<int>(moments.size());
    if (n < 1 || n > 12) {
        throw std::invalid_argument("cumulants_from_moments: order must be in [1, 12]");
    }
    std::vector<double> kappas(moments.size(), 0.0);
    for (int j = 1; j <= n; ++j) {
        long double kj = 0.0L;
        for_each_partition(j, [&](const SetPartition& p) {
            const int k = static_cast<int>(p.blocks.size());
            long double prod = 1.0L;
            for (const auto& block : p.blocks) prod *= moments[block.size() - 1];
            const long double sign = (k % 2 == 0) ? -1.0L : 1.0L;
            kj += sign * static_cast<long double>(factorial_u64(k - 1)) * prod;
        });
        kappas[static_cast<std::size_t>(j - 1)] = static_cast<double>(kj);
    }
    return kappas;
}

} // namespace hawkes
