#pragma once

#include "hawkes/partitions.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hawkes {

// The Bell polynomials are evaluated by enumerating set partitions, which
// keeps every coefficient an exact integer and works over any commutative
// ring element type T (requires copy, operator+ and operator*). Doubles and
// ExpPoly both qualify.

// Partial Bell polynomial B_{n,k}(a_1, ..., a_{n-k+1}).
template <class T>
T partial_bell(int n, int k, std::span<const T> args) {
    if (n < 1 || k < 1 || k > n) {
        throw std::invalid_argument("partial_bell: need 1 <= k <= n");
    }
    if (n > 12) {
        throw std::invalid_argument("partial_bell: n capped at 12");
    }
    if (args.size() != static_cast<std::size_t>(n - k + 1)) {
        throw std::invalid_argument("partial_bell: args must have n-k+1 entries");
    }
    std::optional<T> sum;
    for_each_partition(n, [&](const SetPartition& p) {
        if (p.blocks.size() != static_cast<std::size_t>(k)) return;
        std::optional<T> prod;
        for (const auto& block : p.blocks) {
            const T& factor = args[block.size() - 1];
            if (prod) {
                prod = *prod * factor;
            } else {
                prod = factor;
            }
        }
        if (sum) {
            sum = *sum + *prod;
        } else {
            sum = *prod;
        }
    });
    return *sum; // k <= n guarantees at least one partition with k blocks
}

// Complete Bell polynomial B_n(a_1, ..., a_n) = sum over all partitions of
// the products of args indexed by block sizes.
template <class T>
T complete_bell(int n, std::span<const T> args) {
    if (n < 1) {
        throw std::invalid_argument("complete_bell: n must be positive");
    }
    if (n > 12) {
        throw std::invalid_argument("complete_bell: n capped at 12");
    }
    if (args.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("complete_bell: args must have n entries");
    }
    std::optional<T> sum;
    for_each_partition(n, [&](const SetPartition& p) {
        std::optional<T> prod;
        for (const auto& block : p.blocks) {
            const T& factor = args[block.size() - 1];
            if (prod) {
                prod = *prod * factor;
            } else {
                prod = factor;
            }
        }
        if (sum) {
            sum = *sum + *prod;
        } else {
            sum = *prod;
        }
    });
    return *sum;
}

// E[X^j] from cumulants: sum over partitions of {1..j} of products of
// kappa^{(|block|)}.
std::vector<double> moments_from_cumulants(std::span<const double> kappas);

// Inverse map: kappa^{(n)} = sum_k (k-1)! (-1)^{k-1} sum over partitions
// into k blocks of products of raw moments.
std::vector<double> cumulants_from_moments(std::span<const double> moments);

} // namespace hawkes
