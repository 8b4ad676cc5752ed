#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace hawkes {

// Exponential-kernel Hawkes parameters: excitation a*exp(-b*x) on [0,inf),
// immigrant rate nu on [0, t]. Stability needs a < b (branching ratio a/b).
struct KernelParams {
    double nu = 1.0;
    double a = 0.5;
    double b = 1.0;
    double t = 1.0;

    void validate() const;                  // 0 < a < b, nu > 0, t >= 0
    void validate_allow_zero_a() const;     // simulator accepts the pure-Poisson edge a = 0
    bool same_as(const KernelParams& o) const;
};

// One term coeff * u^p * exp((i*a + j*b) * u). Keeping exponents on the
// integer (a, b) lattice makes the resolvent's resonant case (exponent
// exactly a-b) an integer test instead of a floating comparison.
struct TermKey {
    std::int32_t p = 0;
    std::int32_t i = 0;
    std::int32_t j = 0;
    auto operator<=>(const TermKey&) const = default;
};

// Finite sum of terms c * u^p * e^{(i a + j b) u} on u in [0, t], where
// u = t - z is the age variable. Closed under +, *, the kernel convolution
// and the resolvent, so order-n conditional cumulants stay exact.
class ExpPoly {
public:
    static constexpr int kMaxPower = 16;
    static constexpr int kMaxExponentIndex = 16;

    explicit ExpPoly(const KernelParams& params) : params_(params) {}

    static ExpPoly zero(const KernelParams& params) { return ExpPoly(params); }
    // f = 1 on [0, t] (the counting functional N_t).
    static ExpPoly indicator(const KernelParams& params);
    // e_{0,b}(z) = e^{bz} on [0,t], i.e. e^{bt} e^{-bu} in the age variable.
    static ExpPoly intensity_kernel(const KernelParams& params);
    static ExpPoly term(const KernelParams& params, TermKey key, double coeff);

    const KernelParams& params() const { return params_; }
    const std::map<TermKey, double>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(TermKey key, double coeff);

    ExpPoly& operator+=(const ExpPoly& other);
    friend ExpPoly operator+(ExpPoly lhs, const ExpPoly& rhs) {
        lhs += rhs;
        return lhs;
    }
    friend ExpPoly operator*(const ExpPoly& lhs, const ExpPoly& rhs);

    ExpPoly scaled(double c) const;

    // Pointwise value at u in [0, t].
    double evaluate(double u) const;
    // Exact integral over [0, t].
    double integrate() const;

    // Exponent value i*a + j*b for a term key.
    double exponent(const TermKey& key) const {
        return static_cast<double>(key.i) * params_.a + static_cast<double>(key.j) * params_.b;
    }

private:
    KernelParams params_;
    std::map<TermKey, double> terms_;
};

// R f = (I - Gamma)^{-1} Gamma f. In the age variable the whole Neumann
// series collapses to a single convolution with a*exp((a-b)s):
//   (R f)(u) = a * int_0^u f(u-s) exp((a-b)s) ds,
// evaluated termwise in closed form. Throws a parameter-coincidence error
// when a non-resonant exponent sits within 1e-12*b of a-b; perturb (a, b).
ExpPoly resolvent(const ExpPoly& f);

// One kernel application Gamma f (convolution with a*exp(-b s)); used to
// state the resolvent identity R - Gamma R = Gamma testably.
ExpPoly gamma_step(const ExpPoly& f);

// Test oracle: truncated Neumann series of (I-Gamma)^{-1} Gamma f evaluated
// at age u by iterated trapezoidal quadrature on a `steps`-point grid.
// Deliberately independent of the closed-form path above.
double neumann_oracle(const ExpPoly& f, double u, int m_max, int steps);

} // namespace hawkes
