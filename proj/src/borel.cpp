#include "hawkes/borel.hpp"

#include "hawkes/partitions.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

void BorelParams::validate() const {
    if (!(mu > 0.0 && mu < 1.0)) {
        throw std::domain_error("BorelParams: mu must lie in (0, 1)");
    }
}

std::vector<double> borel_cumulants(const BorelParams& params, int order) {
    params.validate();
    if (order < 1 || order > 12) {
        throw std::invalid_argument("borel_cumulants: order must be in [1, 12]");
    }
    std::vector<double> kappas;
    kappas.reserve(static_cast<std::size_t>(order));
    kappas.push_back(1.0 / (1.0 - params.mu));
    const double ratio = params.mu / (1.0 - params.mu);
    for (int n = 2; n <= order; ++n) {
        // sum_{k=2}^{n} B_{n,k}(kappa_1, ..., kappa_{n-k+1}) in one partition
        // sweep; blocks of size n would reference kappa_n, but those live in
        // the k = 1 partition which the recursion cancels.
        double sum = 0.0;
        for_each_partition(n, [&](const SetPartition& p) {
            if (p.blocks.size() < 2) return;
            double prod = 1.0;
            for (const auto& block : p.blocks) prod *= kappas[block.size() - 1];
            sum += prod;
        });
        kappas.push_back(ratio * sum);
    }
    return kappas;
}

double borel_pmf(const BorelParams& params, std::int64_t n) {
    params.validate();
    if (n < 1) {
        throw std::invalid_argument("borel_pmf: n must be >= 1");
    }
    const double mu = params.mu;
    const double nd = static_cast<double>(n);
    if (n <= 50) {
        double num = 1.0; // (mu n)^{n-1} / n!
        for (std::int64_t i = 1; i < n; ++i) num *= mu * nd / static_cast<double>(i);
        return std::exp(-mu * nd) * num / nd;
    }
    const double log_p = -mu * nd + (nd - 1.0) * std::log(mu * nd) - std::lgamma(nd + 1.0);
    return std::exp(log_p);
}

std::uint64_t borel_sample(const BorelParams& params, SplitRng& rng) {
    params.validate();
    std::uint64_t total = 1; // the root
    std::uint64_t frontier = 1;
    while (frontier > 0) {
        std::uint64_t children = 0;
        for (std::uint64_t i = 0; i < frontier; ++i) {
            children += rng.poisson(params.mu);
        }
        total += children;
        if (total > kBorelNodeCap) {
            throw std::runtime_error(
                "borel_sample: node cap exceeded; mu is too close to criticality");
        }
        frontier = children;
    }
    return total;
}

} // namespace hawkes
