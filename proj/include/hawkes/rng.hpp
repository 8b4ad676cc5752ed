#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace hawkes {

// Deterministic splittable random stream: xoshiro256++ seeded through
// splitmix64 from a (seed, stream) pair. Replication i of a run always
// draws from stream i regardless of how replications are scheduled across
// threads, which is what makes fixed-seed output reproducible.
class SplitRng {
public:
    SplitRng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& word : state_) word = splitmix64(x);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double exponential(double rate) {
        return -std::log1p(-uniform01()) / rate;
    }

    // Exact Poisson sampling; multiplication inversion for small means,
    // additive splitting (Poisson(m) = Poisson(m/2) + Poisson(m/2)) above.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 30.0) {
            const double half = mean / 2.0;
            return poisson(half) + poisson(half);
        }
        const double limit = std::exp(-mean);
        std::uint64_t count = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++count;
            prod *= uniform01();
        }
        return count;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace hawkes
