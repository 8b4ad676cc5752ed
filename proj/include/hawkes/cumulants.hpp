#pragma once

#include "hawkes/exp_poly.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hawkes {

// kappa^(1..order) of N_t plus the derived shape statistics.
struct CumulantVector {
    int order = 0;
    std::vector<double> values;
    std::optional<double> skewness;        // kappa3 / kappa2^{3/2}, order >= 3
    std::optional<double> excess_kurtosis; // kappa4 / kappa2^2, order >= 4
};

// Conditional cumulant functions kappa_z^(n) of sum f over the cluster of a
// single point, expressed in the age variable u = t - z.
struct ConditionalCumulants {
    int order = 0;
    std::vector<ExpPoly> funcs;
};

// kappa_z^(1) = f + R f; for n >= 2
// kappa_z^(n) = R [ sum_{k=2}^{n} B_{n,k}(kappa_z^(1), ..., kappa_z^(n-k+1)) ].
// The k = 1 term of the complete Bell polynomial cancels, which is what makes
// the recursion explicit in lower orders.
ConditionalCumulants conditional_cumulants(const ExpPoly& f, int order,
                                           const KernelParams& params);

// Unconditional cumulants of N_t: kappa^(n) = nu * int_0^t B_n(kappa_z^(1),
// ..., kappa_z^(n)) du, evaluated exactly in the function algebra.
CumulantVector cumulants(int order, const KernelParams& params);

// The explicit closed forms for E[N_t], Var[N_t], kappa^(3)(t), kappa^(4)(t),
// transcribed verbatim (Horner-grouped in powers of e^{(a-b)t}) as an
// independent oracle for cumulants().
double closed_form_reference(int order, const KernelParams& params);

// Multilinear conditional joint cumulant kappa_z^(n)(f_1, ..., f_n) as a
// function of the age u; block products over set partitions, memoized on
// index subsets. With identical arguments it reduces to conditional_cumulants.
ExpPoly joint_conditional_cumulant(std::span<const ExpPoly> fs, const KernelParams& params);

// Unconditional joint cumulant: nu * int over ALL partitions (k = 1..n) of
// the block products of conditional joint cumulants.
double joint_cumulant(std::span<const ExpPoly> fs, const KernelParams& params);

// E[lambda_t] = a e^{-bt} kappa^(1)(e_{0,b}); computed through the recursion
// and cross-checked internally against the closed form nu*a*(1-e^{(a-b)t})/(b-a).
double mean_intensity(const KernelParams& params);
double mean_intensity_closed_form(const KernelParams& params);

// E[lambda_t N_t] = a e^{-bt} ( kappa^(2)(e_{0,0}, e_{0,b})
//                             + kappa^(1)(e_{0,b}) kappa^(1)(e_{0,0}) ).
double intensity_count_moment(const KernelParams& params);
// Reference closed form for E[lambda_t N_t], kept verbatim as an oracle so
// the test suite can triage any deviation against Monte Carlo.
double intensity_count_moment_closed_form(const KernelParams& params);

// Expanded term counts of the recursion at orders 3 and 4 (4 and 24), the
// cross-check against tree enumeration.
std::int64_t partition_term_count(int n);

} // namespace hawkes
