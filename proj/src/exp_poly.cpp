#include "hawkes/exp_poly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hawkes {

namespace {

constexpr double kDropCoeff = 1e-300;
// Below this value of |delta|*t the termwise antiderivative is replaced by
// a short power series in delta*u; the partial-fraction form would cancel
// catastrophically there. The window is kept narrow: the series raises the
// polynomial degree, and the cumulant recursion needs products of resolvents
// to stay within the degree guard (near-critical parameters sit just above
// this threshold and take the partial-fraction route).
constexpr double kSeriesThreshold = 1e-4;
constexpr int kSeriesMaxInputPower = 8;

double pow_int(double x, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

} // namespace

void KernelParams::validate() const {
    if (!(nu > 0.0)) throw std::domain_error("KernelParams: nu must be positive");
    if (!(a > 0.0)) throw std::domain_error("KernelParams: a must be positive");
    if (!(a < b)) throw std::domain_error("KernelParams: stability requires a < b");
    if (!(t >= 0.0)) throw std::domain_error("KernelParams: t must be nonnegative");
}

void KernelParams::validate_allow_zero_a() const {
    if (!(nu >= 0.0)) throw std::domain_error("KernelParams: nu must be nonnegative");
    if (!(a >= 0.0)) throw std::domain_error("KernelParams: a must be nonnegative");
    if (!(a < b)) throw std::domain_error("KernelParams: stability requires a < b");
    if (!(t >= 0.0)) throw std::domain_error("KernelParams: t must be nonnegative");
}

bool KernelParams::same_as(const KernelParams& o) const {
    return nu == o.nu && a == o.a && b == o.b && t == o.t;
}

ExpPoly ExpPoly::indicator(const KernelParams& params) {
    ExpPoly f(params);
    f.add_term({0, 0, 0}, 1.0);
    return f;
}

ExpPoly ExpPoly::intensity_kernel(const KernelParams& params) {
    ExpPoly f(params);
    f.add_term({0, 0, -1}, std::exp(params.b * params.t));
    return f;
}

ExpPoly ExpPoly::term(const KernelParams& params, TermKey key, double coeff) {
    ExpPoly f(params);
    f.add_term(key, coeff);
    return f;
}

void ExpPoly::add_term(TermKey key, double coeff) {
    if (key.p < 0 || key.p > kMaxPower || std::abs(key.i) > kMaxExponentIndex ||
        std::abs(key.j) > kMaxExponentIndex) {
        throw std::domain_error("ExpPoly: term degree guard exceeded (p <= 16, |i|,|j| <= 16)");
    }
    auto [it, inserted] = terms_.try_emplace(key, coeff);
    if (!inserted) {
        it->second += coeff;
        if (std::abs(it->second) < kDropCoeff) terms_.erase(it);
    } else if (std::abs(coeff) < kDropCoeff) {
        terms_.erase(it);
    }
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& other) {
    if (!params_.same_as(other.params_)) {
        throw std::invalid_argument("ExpPoly: operands built over different params");
    }
    for (const auto& [key, coeff] : other.terms_) add_term(key, coeff);
    return *this;
}

ExpPoly operator*(const ExpPoly& lhs, const ExpPoly& rhs) {
    if (!lhs.params_.same_as(rhs.params_)) {
        throw std::invalid_argument("ExpPoly: operands built over different params");
    }
    ExpPoly out(lhs.params_);
    for (const auto& [ka, ca] : lhs.terms_) {
        for (const auto& [kb, cb] : rhs.terms_) {
            out.add_term({ka.p + kb.p, ka.i + kb.i, ka.j + kb.j}, ca * cb);
        }
    }
    return out;
}

ExpPoly ExpPoly::scaled(double c) const {
    ExpPoly out(params_);
    if (c == 0.0) return out;
    for (const auto& [key, coeff] : terms_) out.add_term(key, c * coeff);
    return out;
}

double ExpPoly::evaluate(double u) const {
    const double slack = 1e-12 * (1.0 + params_.t);
    if (!(u >= -slack && u <= params_.t + slack)) {
        throw std::invalid_argument("ExpPoly::evaluate: u outside [0, t]");
    }
    double sum = 0.0;
    for (const auto& [key, coeff] : terms_) {
        sum += coeff * pow_int(u, key.p) * std::exp(exponent(key) * u);
    }
    return sum;
}

double ExpPoly::integrate() const {
    const double t = params_.t;
    if (t <= 0.0) return 0.0;
    double total = 0.0;
    for (const auto& [key, coeff] : terms_) {
        const int p = key.p;
        double integral;
        if (key.i == 0 && key.j == 0) {
            integral = pow_int(t, p + 1) / static_cast<double>(p + 1);
        } else {
            const double alpha = exponent(key);
            if (std::abs(alpha) * t <= 1.0) {
                // sum_m alpha^m t^{p+m+1} / (m! (p+m+1)); converges fast here
                double term = pow_int(t, p + 1);
                integral = term / static_cast<double>(p + 1);
                for (int m = 1; m <= 48; ++m) {
                    term *= alpha * t / static_cast<double>(m);
                    const double inc = term / static_cast<double>(p + m + 1);
                    integral += inc;
                    if (std::abs(inc) <= 1e-18 * std::abs(integral)) break;
                }
            } else {
                // e^{alpha t} sum_r (-1)^r p!/(p-r)! t^{p-r}/alpha^{r+1}
                //   - (-1)^p p!/alpha^{p+1}
                double factor = 1.0 / alpha; // (-1)^r p!/(p-r)! / alpha^{r+1}
                double bracket = 0.0;
                for (int r = 0; r <= p; ++r) {
                    bracket += factor * pow_int(t, p - r);
                    factor *= -static_cast<double>(p - r) / alpha;
                }
                double tail = 1.0 / alpha; // (-1)^p p! / alpha^{p+1}
                for (int r = 1; r <= p; ++r) tail *= -static_cast<double>(r) / alpha;
                integral = std::exp(alpha * t) * bracket - tail;
            }
        }
        total += coeff * integral;
    }
    return total;
}

namespace {

// Shared closed-form convolution (K * f)(u) = c0 * int_0^u f(u-s) e^{beta s} ds
// where beta = kernel_i * a + kernel_j * b. Termwise on coeff * u^p e^{alpha u}:
//   resonant (alpha == beta as lattice keys): c0 * coeff * u^{p+1} e^{beta u} / (p+1)
//   otherwise with delta = alpha - beta:
//     c0 e^{beta u} * int_0^u y^p e^{delta y} dy
// evaluated by partial fractions, or by a series in delta*u near resonance.
ExpPoly convolve_exponential(const ExpPoly& f, double c0, std::int32_t kernel_i,
                             std::int32_t kernel_j, bool strict_coincidence) {
    const KernelParams& params = f.params();
    ExpPoly out(params);
    const double t = params.t;
    for (const auto& [key, coeff] : f.terms()) {
        const int p = key.p;
        const std::int32_t di = key.i - kernel_i;
        const std::int32_t dj = key.j - kernel_j;
        if (di == 0 && dj == 0) {
            out.add_term({p + 1, key.i, key.j}, c0 * coeff / static_cast<double>(p + 1));
            continue;
        }
        const double delta = static_cast<double>(di) * params.a + static_cast<double>(dj) * params.b;
        if (std::abs(delta) < 1e-12 * params.b) {
            if (strict_coincidence) {
                throw std::runtime_error(
                    "ExpPoly convolution: exponent coincides numerically with the kernel "
                    "exponent but is not the resonant lattice key; perturb (a, b) to break "
                    "the coincidence");
            }
            // off-lattice coincidence (e.g. b = 2a): the resonant form is the
            // exact limit, keep the term's own exponent key
            out.add_term({p + 1, key.i, key.j}, c0 * coeff / static_cast<double>(p + 1));
            continue;
        }
        if (std::abs(delta) * t <= kSeriesThreshold && p <= kSeriesMaxInputPower) {
            // c0 e^{beta u} sum_m delta^m u^{p+m+1} / (m! (p+m+1))
            double term = c0 * coeff; // delta^m / m! running coefficient
            for (int m = 0; p + m + 1 <= ExpPoly::kMaxPower; ++m) {
                out.add_term({p + m + 1, kernel_i, kernel_j},
                             term / static_cast<double>(p + m + 1));
                term *= delta / static_cast<double>(m + 1);
                if (std::abs(term) * pow_int(t, p + m + 2) <=
                    1e-18 * std::abs(c0 * coeff) * pow_int(t, p + 1)) {
                    break;
                }
            }
            continue;
        }
        // partial fractions: terms u^{p-r} e^{alpha u} plus one e^{beta u} term
        double factor = 1.0 / delta; // (-1)^r p!/(p-r)! / delta^{r+1}
        for (int r = 0; r <= p; ++r) {
            out.add_term({p - r, key.i, key.j}, c0 * coeff * factor);
            if (r < p) factor *= -static_cast<double>(p - r) / delta;
        }
        double tail = 1.0 / delta; // (-1)^p p! / delta^{p+1}
        for (int r = 1; r <= p; ++r) tail *= -static_cast<double>(r) / delta;
        out.add_term({0, kernel_i, kernel_j}, -c0 * coeff * tail);
    }
    return out;
}

} // namespace

ExpPoly resolvent(const ExpPoly& f) {
    f.params().validate();
    return convolve_exponential(f, f.params().a, 1, -1, /*strict_coincidence=*/true);
}

ExpPoly gamma_step(const ExpPoly& f) {
    f.params().validate();
    return convolve_exponential(f, f.params().a, 0, -1, /*strict_coincidence=*/false);
}

double neumann_oracle(const ExpPoly& f, double u, int m_max, int steps) {
    const KernelParams& params = f.params();
    if (m_max < 0 || m_max > 40) throw std::invalid_argument("neumann_oracle: m_max in [0, 40]");
    if (steps < 2 || steps > 1'000'000) {
        throw std::invalid_argument("neumann_oracle: steps in [2, 1e6]");
    }
    const double t = params.t;
    if (!(u >= -1e-12 && u <= t + 1e-12)) {
        throw std::invalid_argument("neumann_oracle: u outside [0, t]");
    }
    if (m_max == 0 || t <= 0.0) return 0.0;

    const int n = steps;
    const double h = t / static_cast<double>(n);
    const double decay = std::exp(-params.b * h);

    // grid in the original coordinate z = t - u; f(z) = evaluate at age t - z
    std::vector<double> g(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double z = h * static_cast<double>(i);
        g[static_cast<std::size_t>(i)] = f.evaluate(t - z);
    }
    std::vector<double> acc(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> next(static_cast<std::size_t>(n) + 1);
    for (int m = 1; m <= m_max; ++m) {
        // (Gamma g)(z_i) = a * int_{z_i}^{t} g(y) e^{-b (y - z_i)} dy via the
        // backward recurrence I_i = e^{-bh} I_{i+1} + trapezoid on [z_i, z_{i+1}]
        double integral = 0.0;
        next[static_cast<std::size_t>(n)] = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            const double local = 0.5 * h *
                (g[static_cast<std::size_t>(i)] + g[static_cast<std::size_t>(i + 1)] * decay);
            integral = decay * integral + local;
            next[static_cast<std::size_t>(i)] = params.a * integral;
        }
        for (int i = 0; i <= n; ++i) {
            acc[static_cast<std::size_t>(i)] += next[static_cast<std::size_t>(i)];
        }
        g.swap(next);
    }
    // evaluate at z = t - u by linear interpolation
    const double z = std::min(std::max(t - u, 0.0), t);
    const double pos = z / h;
    const int lo = std::min(static_cast<int>(pos), n - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * acc[static_cast<std::size_t>(lo)] + w * acc[static_cast<std::size_t>(lo + 1)];
}

} // namespace hawkes
