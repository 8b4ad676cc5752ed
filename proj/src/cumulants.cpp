#include "hawkes/cumulants.hpp"

#include "hawkes/bell.hpp"
#include "hawkes/partitions.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace hawkes {

ConditionalCumulants conditional_cumulants(const ExpPoly& f, int order,
                                           const KernelParams& params) {
    params.validate();
    if (!f.params().same_as(params)) {
        throw std::invalid_argument("conditional_cumulants: f built over different params");
    }
    if (order < 1 || order > 6) {
        throw std::invalid_argument("conditional_cumulants: order must be in [1, 6]");
    }
    ConditionalCumulants cc;
    cc.order = order;
    cc.funcs.reserve(static_cast<std::size_t>(order));
    cc.funcs.push_back(f + resolvent(f));
    for (int n = 2; n <= order; ++n) {
        ExpPoly inner = ExpPoly::zero(params);
        for (int k = 2; k <= n; ++k) {
            inner += partial_bell<ExpPoly>(
                n, k,
                std::span<const ExpPoly>(cc.funcs.data(), static_cast<std::size_t>(n - k + 1)));
        }
        cc.funcs.push_back(resolvent(inner));
    }
    return cc;
}

CumulantVector cumulants(int order, const KernelParams& params) {
    params.validate();
    if (order < 1 || order > 6) {
        throw std::invalid_argument("cumulants: order must be in [1, 6]");
    }
    const auto cc = conditional_cumulants(ExpPoly::indicator(params), order, params);
    CumulantVector out;
    out.order = order;
    out.values.reserve(static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n) {
        const ExpPoly bn = complete_bell<ExpPoly>(
            n, std::span<const ExpPoly>(cc.funcs.data(), static_cast<std::size_t>(n)));
        out.values.push_back(params.nu * bn.integrate());
    }
    if (order >= 3 && out.values[1] > 0.0) {
        out.skewness = out.values[2] / std::pow(out.values[1], 1.5);
    }
    if (order >= 4 && out.values[1] > 0.0) {
        out.excess_kurtosis = out.values[3] / (out.values[1] * out.values[1]);
    }
    return out;
}

double closed_form_reference(int order, const KernelParams& params) {
    params.validate();
    if (order < 1 || order > 4) {
        throw std::invalid_argument("closed_form_reference: order must be in [1, 4]");
    }
    // the expressions cancel to 0 identically at t = 0; return the limit
    // exactly rather than through 1/(a-b)^{2n-2}-amplified roundoff
    if (params.t == 0.0) return 0.0;
    const double nu = params.nu;
    const double a = params.a;
    const double b = params.b;
    const double t = params.t;
    const double d = a - b; // negative under stability
    const double E = std::exp(d * t);
    switch (order) {
        case 1:
            return nu / (d * d) * (-a + b * (b - a) * t + a * E);
        case 2: {
            const double c0 = 6 * a * b * b - a * a * b + 2 * b * b * b * d * t;
            const double c1 = 2 * a * (a * a - 3 * b * b + 2 * a * b * d * t);
            const double c2 = a * a * (b - 2 * a);
            return -nu / (2 * pow(d, 4)) * (c0 + c1 * E + c2 * E * E);
        }
        case 3: {
            const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
            const double b2 = b * b, b3 = b2 * b, b4 = b3 * b;
            const double c0 =
                42 * a * b4 + 30 * a2 * b3 - 7 * a3 * b2 + a4 * b +
                6 * b4 * (2 * a2 - a * b - b2) * t;
            const double c1 =
                3 * (18 * a3 * b2 - 16 * a2 * b3 - a4 * b - 14 * a * b4 - 2 * a5 +
                     6 * a2 * b * (4 * a * b2 - 4 * b3 + a2 * b - a3) * t -
                     6 * a3 * b2 * d * d * t * t);
            const double c2 =
                9 * (2 * a2 * b3 - 5 * a3 * b2 - a4 * b + 2 * a5 +
                     2 * a3 * b * (b2 - 3 * a * b + 2 * a2) * t);
            const double c3 = -a3 * (2 * b2 - 11 * a * b + 12 * a2);
            return -nu / (6 * pow(d, 6)) * (c0 + c1 * E + c2 * E * E + c3 * E * E * E);
        }
        case 4: {
            const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a, a6 = a5 * a,
                         a7 = a6 * a;
            const double b2 = b * b, b3 = b2 * b, b4 = b3 * b, b5 = b4 * b, b6 = b5 * b;
            const double c0 =
                180 * a * b6 + 570 * a2 * b5 + 100 * a3 * b4 - 15 * a4 * b3 + 2 * a5 * b2 +
                12 * b5 * (6 * a3 + 2 * a2 * b - b3 - 7 * a * b2) * t;
            const double c1 =
                4 * (5 * a6 * b - 45 * a * b6 + 3 * a7 - 59 * a5 * b2 - 180 * a2 * b5 +
                     75 * a3 * b4 + 75 * a4 * b3 +
                     6 * a2 * b * (5 * a * b4 - 25 * b5 + 41 * a2 * b3 - 22 * a3 * b2 - a4 * b +
                                   2 * a5) * t +
                     18 * a3 * b2 * (10 * a * b3 - 5 * b4 - 4 * a2 * b2 - 2 * a3 * b + a4) * t * t +
                     12 * a4 * b3 * d * d * d * t * t * t);
            const double c2 =
                150 * a2 * b5 - 360 * a3 * b4 - 564 * a4 * b3 + 588 * a5 * b2 + 18 * a6 * b -
                84 * a7 +
                4 * a3 * b * (90 * b4 - 306 * a * b3 + 180 * a2 * b2 + 108 * a3 * b - 72 * a4) * t +
                144 * a4 * b2 * (-4 * a * b2 + b3 + 5 * a2 * b - 2 * a3) * t * t;
            const double c3 =
                276 * a4 * b3 - 40 * a3 * b4 - 132 * a6 * b - 320 * a5 * b2 + 144 * a7 +
                24 * a4 * b * (13 * a * b2 - 23 * a2 * b - 2 * b3 + 12 * a3) * t;
            const double c4 = a4 * (3 * b3 - 34 * a * b2 + 94 * a2 * b - 72 * a3);
            return -nu / (12 * pow(d, 8)) *
                   (c0 + c1 * E + c2 * E * E + c3 * E * E * E + c4 * E * E * E * E);
        }
        default:
            throw std::invalid_argument("closed_form_reference: order must be in [1, 4]");
    }
}

namespace {

// Memoized conditional joint cumulants on index subsets. Masks address the
// subset of fs; popcount-1 subsets are (I + R) f_i, larger subsets follow
// the partition recursion with one resolvent application on the block sum.
class JointRecursion {
public:
    JointRecursion(std::span<const ExpPoly> fs, const KernelParams& params)
        : fs_(fs), params_(params) {}

    const ExpPoly& conditional(std::uint32_t mask) {
        auto it = memo_.find(mask);
        if (it != memo_.end()) return it->second;
        ExpPoly value = compute(mask);
        return memo_.emplace(mask, std::move(value)).first->second;
    }

    // sum over ALL partitions (k >= 1 blocks) of the subset, of the product
    // of conditional joint cumulants over blocks
    ExpPoly partition_sum_all(std::uint32_t mask) {
        std::vector<int> idx = bits(mask);
        ExpPoly sum = ExpPoly::zero(params_);
        for_each_partition(static_cast<int>(idx.size()), [&](const SetPartition& p) {
            ExpPoly prod = ExpPoly::zero(params_);
            bool first = true;
            for (const auto& block : p.blocks) {
                std::uint32_t bm = 0;
                for (int e : block) bm |= 1u << idx[static_cast<std::size_t>(e - 1)];
                prod = first ? conditional(bm) : prod * conditional(bm);
                first = false;
            }
            sum += prod;
        });
        return sum;
    }

private:
    ExpPoly compute(std::uint32_t mask) {
        if (std::popcount(mask) == 1) {
            const int i = std::countr_zero(mask);
            const ExpPoly& f = fs_[static_cast<std::size_t>(i)];
            return f + resolvent(f);
        }
        std::vector<int> idx = bits(mask);
        ExpPoly inner = ExpPoly::zero(params_);
        for_each_partition(static_cast<int>(idx.size()), [&](const SetPartition& p) {
            if (p.blocks.size() < 2) return; // k = 1 cancels in the recursion
            ExpPoly prod = ExpPoly::zero(params_);
            bool first = true;
            for (const auto& block : p.blocks) {
                std::uint32_t bm = 0;
                for (int e : block) bm |= 1u << idx[static_cast<std::size_t>(e - 1)];
                prod = first ? conditional(bm) : prod * conditional(bm);
                first = false;
            }
            inner += prod;
        });
        return resolvent(inner);
    }

    static std::vector<int> bits(std::uint32_t mask) {
        std::vector<int> idx;
        for (int i = 0; i < 32; ++i) {
            if (mask & (1u << i)) idx.push_back(i);
        }
        return idx;
    }

    std::span<const ExpPoly> fs_;
    KernelParams params_;
    std::unordered_map<std::uint32_t, ExpPoly> memo_;
};

void check_joint_args(std::span<const ExpPoly> fs, const KernelParams& params) {
    params.validate();
    if (fs.empty() || fs.size() > 4) {
        throw std::invalid_argument("joint cumulants: need 1 to 4 functions");
    }
    for (const auto& f : fs) {
        if (!f.params().same_as(params)) {
            throw std::invalid_argument("joint cumulants: functions built over different params");
        }
    }
}

} // namespace

ExpPoly joint_conditional_cumulant(std::span<const ExpPoly> fs, const KernelParams& params) {
    check_joint_args(fs, params);
    JointRecursion rec(fs, params);
    const std::uint32_t full = (1u << fs.size()) - 1u;
    return rec.conditional(full);
}

double joint_cumulant(std::span<const ExpPoly> fs, const KernelParams& params) {
    check_joint_args(fs, params);
    JointRecursion rec(fs, params);
    const std::uint32_t full = (1u << fs.size()) - 1u;
    return params.nu * rec.partition_sum_all(full).integrate();
}

double mean_intensity_closed_form(const KernelParams& params) {
    params.validate();
    return params.nu * params.a * (1.0 - std::exp((params.a - params.b) * params.t)) /
           (params.b - params.a);
}

double mean_intensity(const KernelParams& params) {
    params.validate();
    const ExpPoly e0b = ExpPoly::intensity_kernel(params);
    const double kappa1 = params.nu * (e0b + resolvent(e0b)).integrate();
    const double value = params.a * std::exp(-params.b * params.t) * kappa1;
    const double reference = mean_intensity_closed_form(params);
    if (std::isfinite(value) && std::isfinite(reference) &&
        std::abs(value - reference) > 1e-6 * std::max(1.0, std::abs(reference))) {
        throw std::logic_error("mean_intensity: recursion and closed form disagree");
    }
    return value;
}

double intensity_count_moment(const KernelParams& params) {
    params.validate();
    const ExpPoly e00 = ExpPoly::indicator(params);
    const ExpPoly e0b = ExpPoly::intensity_kernel(params);
    const ExpPoly pair[] = {e00, e0b};
    const double joint2 = joint_cumulant(std::span<const ExpPoly>(pair, 2), params);
    const double k1_count = joint_cumulant(std::span<const ExpPoly>(pair, 1), params);
    const double k1_kernel = joint_cumulant(std::span<const ExpPoly>(&pair[1], 1), params);
    return params.a * std::exp(-params.b * params.t) * (joint2 + k1_kernel * k1_count);
}

double intensity_count_moment_closed_form(const KernelParams& params) {
    params.validate();
    const double nu = params.nu;
    const double a = params.a;
    const double b = params.b;
    const double t = params.t;
    const double d = a - b;
    const double E = std::exp(d * t);
    const double inner =
        b * b - nu * a - a * b + nu * b * (b - a) * t +
        a * (a - nu + a * (b - a) * t) * E * E +
        (2 * nu * a - a * a + a * b - b * b + (nu * a * b - nu * b * b - a * d * d) * t +
         a * b * d * d * t * t / 2) * E;
    return -nu * a / (d * d * d) * inner;
}

std::int64_t partition_term_count(int n) {
    if (n != 3 && n != 4) {
        throw std::invalid_argument("partition_term_count: defined for n in {3, 4}");
    }
    // weight(1) = weight(2) = 1; weight(m) = sum over partitions with k >= 2
    // blocks of the product of block weights: each kappa^(3) factor expands
    // into its own 4 terms. Gives 4 at n=3 and 6 + 4*4 + 3*1 + 1*1 = 26 at
    // n=4 (the count of leaf-labeled hierarchies, A000311).
    std::vector<std::int64_t> weight(static_cast<std::size_t>(n) + 1, 0);
    weight[1] = 1;
    if (n >= 2) weight[2] = 1;
    for (int m = 3; m <= n; ++m) {
        std::int64_t total = 0;
        for_each_partition(m, [&](const SetPartition& p) {
            if (p.blocks.size() < 2) return;
            std::int64_t prod = 1;
            for (const auto& block : p.blocks) prod *= weight[block.size()];
            total += prod;
        });
        weight[static_cast<std::size_t>(m)] = total;
    }
    return weight[static_cast<std::size_t>(n)];
}

} // namespace hawkes
