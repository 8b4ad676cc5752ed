#pragma once

#include "hawkes/rng.hpp"

#include <cstdint>
#include <vector>

namespace hawkes {

// Offspring mean of the Poisson branching; the total progeny of such a tree
// is Borel distributed. Subcritical mu keeps it finite almost surely.
struct BorelParams {
    double mu = 0.5;
    void validate() const; // requires 0 < mu < 1
};

// kappa^(1) = 1/(1-mu); higher orders follow the explicit Bell-polynomial
// recursion kappa^(n) = mu/(1-mu) * sum_{k=2}^{n} B_{n,k}(kappa^(1), ...,
// kappa^(n-k+1)), which only uses orders below n.
std::vector<double> borel_cumulants(const BorelParams& params, int order);

// P(X = n) = exp(-mu n) (mu n)^{n-1} / n!, in log space for large n.
double borel_pmf(const BorelParams& params, std::int64_t n);

// Total progeny of a Galton-Watson tree with Poisson(mu) offspring, root
// included. Breadth-first with a node cap so near-critical mu fails loudly
// instead of hanging.
std::uint64_t borel_sample(const BorelParams& params, SplitRng& rng);

inline constexpr std::uint64_t kBorelNodeCap = 1'000'000;

} // namespace hawkes
