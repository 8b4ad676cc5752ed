#include "hawkes/partitions.hpp"

#include <array>
#include <stdexcept>

namespace hawkes {

namespace {

constexpr std::array<std::uint64_t, 21> kFactorials = [] {
    std::array<std::uint64_t, 21> f{};
    f[0] = 1;
    for (int i = 1; i <= 20; ++i) f[i] = f[i - 1] * static_cast<std::uint64_t>(i);
    return f;
}();

} // namespace

std::uint64_t factorial_u64(int n) {
    if (n < 0 || n > 20) {
        throw std::invalid_argument("factorial_u64: n must be in [0, 20]");
    }
    return kFactorials[static_cast<std::size_t>(n)];
}

void for_each_partition(int n, const std::function<void(const SetPartition&)>& visit) {
    if (n < 1) {
        throw std::invalid_argument("for_each_partition: n must be positive");
    }
    // Restricted growth strings: c[0] = 0, c[i] <= 1 + max(c[0..i-1]).
    std::vector<int> code(static_cast<std::size_t>(n), 0);
    std::vector<int> maxima(static_cast<std::size_t>(n), 0); // maxima[i] = max(code[0..i-1]), maxima[0] = -1
    maxima[0] = -1;
    SetPartition part;
    part.blocks.reserve(static_cast<std::size_t>(n));

    const auto emit = [&] {
        part.blocks.clear();
        for (int i = 0; i < n; ++i) {
            const auto block = static_cast<std::size_t>(code[static_cast<std::size_t>(i)]);
            if (block == part.blocks.size()) part.blocks.emplace_back();
            part.blocks[block].push_back(i + 1);
        }
        visit(part);
    };

    while (true) {
        emit();
        // advance to the next restricted growth string
        int i = n - 1;
        while (i > 0 && code[static_cast<std::size_t>(i)] == maxima[static_cast<std::size_t>(i)] + 1) {
            --i;
        }
        if (i == 0) break;
        ++code[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) {
            code[static_cast<std::size_t>(j)] = 0;
            maxima[static_cast<std::size_t>(j)] =
                std::max(maxima[static_cast<std::size_t>(j - 1)], code[static_cast<std::size_t>(j - 1)]);
        }
    }
}

std::vector<SetPartition> enumerate_partitions(int n) {
    if (n < 1 || n > 12) {
        throw std::invalid_argument("enumerate_partitions: n must be in [1, 12]");
    }
    std::vector<SetPartition> out;
    out.reserve(static_cast<std::size_t>(bell_number(n)));
    for_each_partition(n, [&](const SetPartition& p) { out.push_back(p); });
    return out;
}

std::uint64_t bell_number(int n) {
    if (n < 0 || n > 20) {
        throw std::invalid_argument("bell_number: n must be in [0, 20] to stay exact in 64 bits");
    }
    // Bell triangle
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(i) + 1);
        next[0] = row.back();
        for (std::size_t j = 0; j < row.size(); ++j) next[j + 1] = next[j] + row[j];
        row.swap(next);
    }
    return row.front();
}

} // namespace hawkes
