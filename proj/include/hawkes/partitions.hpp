#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace hawkes {

// A partition of {1,...,n} into disjoint nonempty blocks.
struct SetPartition {
    std::vector<std::vector<int>> blocks;
};

// Visits every partition of {1,...,n} exactly once (restricted growth
// strings, lexicographic). The SetPartition passed to the visitor is a
// reusable buffer; copy it if you need to keep it.
void for_each_partition(int n, const std::function<void(const SetPartition&)>& visit);

// Materialized variant. Guarded to n <= 12 (B_12 is ~4.2M partitions).
std::vector<SetPartition> enumerate_partitions(int n);

// Number of partitions of an n-element set, exact for n <= 20.
std::uint64_t bell_number(int n);

// Exact n! for n <= 20.
std::uint64_t factorial_u64(int n);

} // namespace hawkes
