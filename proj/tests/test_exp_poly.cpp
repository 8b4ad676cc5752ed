#include "doctest.h"

#include "hawkes/exp_poly.hpp"
#include "hawkes/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hawkes;

namespace {

const KernelParams kBase{1.0, 0.5, 1.0, 1.0};

ExpPoly random_poly(const KernelParams& params, SplitRng& rng) {
    ExpPoly f(params);
    const std::vector<TermKey> keys{{0, 0, 0}, {1, 1, -1}, {0, 2, -2}, {2, 0, -1}, {0, 1, 0}};
    for (const auto& key : keys) {
        f.add_term(key, 2.0 * rng.uniform01() - 1.0);
    }
    return f;
}

// adaptive Simpson on evaluate(), oracle for integrate()
double simpson(const ExpPoly& f, double lo, double hi, int depth, double flo, double fmid,
               double fhi) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = f.evaluate(0.5 * (lo + mid));
    const double rmid = f.evaluate(0.5 * (mid + hi));
    const double coarse = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double fine = (hi - lo) / 12.0 * (flo + 4.0 * lmid + 2.0 * fmid + 4.0 * rmid + fhi);
    if (depth <= 0 || std::abs(fine - coarse) < 1e-13 * (1.0 + std::abs(fine))) {
        return fine + (fine - coarse) / 15.0;
    }
    return simpson(f, lo, mid, depth - 1, flo, lmid, fmid) +
           simpson(f, mid, hi, depth - 1, fmid, rmid, fhi);
}

double quadrature(const ExpPoly& f) {
    const double t = f.params().t;
    if (t <= 0.0) return 0.0;
    return simpson(f, 0.0, t, 24, f.evaluate(0.0), f.evaluate(0.5 * t), f.evaluate(t));
}

} // namespace

TEST_CASE("indicator and intensity kernel basics") {
    const auto one = ExpPoly::indicator(kBase);
    CHECK(one.evaluate(0.0) == doctest::Approx(1.0));
    CHECK(one.evaluate(kBase.t) == doctest::Approx(1.0));
    CHECK(one.integrate() == doctest::Approx(kBase.t));

    const auto e0b = ExpPoly::intensity_kernel(kBase);
    CHECK(e0b.evaluate(0.0) == doctest::Approx(std::exp(kBase.b * kBase.t)));
    CHECK(e0b.evaluate(kBase.t) == doctest::Approx(1.0));
    CHECK(e0b.evaluate(0.5) == doctest::Approx(std::exp(0.5)).epsilon(1e-12)); // b=1, t=1

    CHECK_THROWS_AS(one.evaluate(kBase.t + 0.5), std::invalid_argument);
    CHECK_THROWS_AS(one.evaluate(-0.5), std::invalid_argument);
}

TEST_CASE("ring operations agree with pointwise arithmetic") {
    SplitRng rng(11, 0);
    const auto f = random_poly(kBase, rng);
    const auto g = random_poly(kBase, rng);
    const auto one = ExpPoly::indicator(kBase);

    // multiplicative identity
    const auto idmul = one * f;
    for (int i = 0; i <= 10; ++i) {
        const double u = kBase.t * i / 10.0;
        CHECK(idmul.evaluate(u) == doctest::Approx(f.evaluate(u)).epsilon(1e-12));
    }

    // exponent law on monomials
    const auto m1 = ExpPoly::term(kBase, {2, 1, 0}, 1.5);
    const auto m2 = ExpPoly::term(kBase, {1, 0, -1}, -2.0);
    const auto m12 = m1 * m2;
    REQUIRE(m12.terms().size() == 1);
    CHECK(m12.terms().begin()->first == TermKey{3, 1, -1});
    CHECK(m12.terms().begin()->second == doctest::Approx(-3.0));

    // pointwise product / sum / distributivity at random points
    const auto sum = f + g;
    const auto prod = f * g;
    const auto dist = (f + g) * f;
    for (int i = 0; i < 100; ++i) {
        const double u = kBase.t * rng.uniform01();
        const double fu = f.evaluate(u);
        const double gu = g.evaluate(u);
        CHECK(sum.evaluate(u) == doctest::Approx(fu + gu).epsilon(1e-12));
        CHECK(prod.evaluate(u) == doctest::Approx(fu * gu).epsilon(1e-12));
        CHECK(dist.evaluate(u) == doctest::Approx((fu + gu) * fu).epsilon(1e-11));
        CHECK(f.scaled(2.5).evaluate(u) == doctest::Approx(2.5 * fu).epsilon(1e-12));
    }

    KernelParams other = kBase;
    other.t = 2.0;
    CHECK_THROWS_AS(f + ExpPoly::indicator(other), std::invalid_argument);
    CHECK_THROWS_AS(f * ExpPoly::indicator(other), std::invalid_argument);
}

TEST_CASE("resolvent closed forms") {
    // R 1 = a (e^{(a-b)u} - 1)/(a-b)
    const auto r1 = resolvent(ExpPoly::indicator(kBase));
    const double a = kBase.a, b = kBase.b;
    for (int i = 0; i <= 8; ++i) {
        const double u = kBase.t * i / 8.0;
        const double expect = a * (std::exp((a - b) * u) - 1.0) / (a - b);
        CHECK(r1.evaluate(u) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(r1.evaluate(1.0) == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-12));

    // resonant input: R e^{(a-b)u} = a u e^{(a-b)u}
    const auto res = resolvent(ExpPoly::term(kBase, {0, 1, -1}, 1.0));
    REQUIRE(res.terms().size() == 1);
    CHECK(res.terms().begin()->first == TermKey{1, 1, -1});
    CHECK(res.terms().begin()->second == doctest::Approx(a));

    // linearity and the zero function
    CHECK(resolvent(ExpPoly::zero(kBase)).is_zero());
    SplitRng rng(5, 0);
    const auto f = random_poly(kBase, rng);
    const auto g = random_poly(kBase, rng);
    const auto rsum = resolvent(f + g);
    const auto rf = resolvent(f);
    const auto rg = resolvent(g);
    for (int i = 0; i <= 10; ++i) {
        const double u = kBase.t * i / 10.0;
        CHECK(rsum.evaluate(u) ==
              doctest::Approx(rf.evaluate(u) + rg.evaluate(u)).epsilon(1e-11));
    }
}

TEST_CASE("resolvent identity R - Gamma R = Gamma") {
    SplitRng rng(17, 0);
    for (const double t : {0.5, 1.0, 2.0}) {
        KernelParams params = kBase;
        params.t = t;
        const auto f = random_poly(params, rng);
        const auto rf = resolvent(f);
        const auto lhs = rf + gamma_step(rf).scaled(-1.0);
        const auto rhs = gamma_step(f);
        for (int i = 0; i <= 16; ++i) {
            const double u = t * i / 16.0;
            CHECK(lhs.evaluate(u) == doctest::Approx(rhs.evaluate(u)).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("resolvent agrees with the Neumann-series oracle") {
    // basis sweep: p in {0,1,2}, lattice exponents, a=0.5, b=1, t in {0.5,1,2}
    const std::vector<std::pair<int, int>> exps{{0, 0}, {1, -1}, {2, -2}, {0, -1}};
    for (const double t : {0.5, 1.0, 2.0}) {
        KernelParams params = kBase;
        params.t = t;
        for (int p = 0; p <= 2; ++p) {
            for (const auto& [i, j] : exps) {
                const auto f = ExpPoly::term(params, {p, i, j}, 1.0);
                const auto rf = resolvent(f);
                for (const double u : {0.0, t / 2.0, t}) {
                    const double oracle = neumann_oracle(f, u, 30, 8000);
                    CHECK(rf.evaluate(u) == doctest::Approx(oracle).epsilon(1e-6).scale(1.0));
                }
            }
        }
    }

    // m_max = 0 is the empty series
    CHECK(neumann_oracle(ExpPoly::indicator(kBase), 0.5, 0, 100) == 0.0);

    // resonant polynomial term u e^{(a-b)u}
    const auto f = ExpPoly::term(kBase, {1, 1, -1}, 1.0);
    const auto rf = resolvent(f);
    for (const double u : {0.25, 0.5, 1.0}) {
        CHECK(rf.evaluate(u) ==
              doctest::Approx(neumann_oracle(f, u, 30, 8000)).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("near-resonant exponents stay accurate and exact coincidences throw") {
    // b chosen so the key (3,-2) exponent equals (1+eps)(a-b): off-resonant by
    // a relative eps that the series path must handle without cancellation
    for (const double eps : {1e-6, -1e-6}) {
        const double a = 0.5;
        const double b = a * (2.0 - eps) / (1.0 - eps);
        KernelParams params{1.0, a, b, 2.0};
        for (int p = 0; p <= 2; ++p) {
            const auto f = ExpPoly::term(params, {p, 3, -2}, 1.0);
            const auto rf = resolvent(f);
            for (const double u : {1.0, 2.0}) {
                // resonant limit: a u^{p+1} e^{(a-b)u} / (p+1)
                const double limit = a * std::pow(u, p + 1) *
                                     std::exp((a - b) * u) / (p + 1);
                CHECK(rf.evaluate(u) == doctest::Approx(limit).epsilon(1e-4));
            }
        }
    }

    // exact coincidence off the resonant key: b = 2a makes the (3,-2)
    // exponent equal a-b exactly
    const auto bad = ExpPoly::term(kBase, {0, 3, -2}, 1.0);
    CHECK_THROWS_AS(resolvent(bad), std::runtime_error);
}

TEST_CASE("integrate matches quadrature") {
    CHECK(ExpPoly::term(kBase, {0, 1, -1}, 1.0).integrate() ==
          doctest::Approx((1.0 - std::exp(-0.5)) / 0.5).epsilon(1e-12));

    SplitRng rng(23, 0);
    for (const double t : {0.3, 1.0, 3.0}) {
        KernelParams params = kBase;
        params.t = t;
        for (int rep = 0; rep < 5; ++rep) {
            const auto f = random_poly(params, rng);
            CHECK(f.integrate() == doctest::Approx(quadrature(f)).epsilon(1e-9).scale(1.0));
        }
    }

    // zero-width window
    KernelParams degenerate = kBase;
    degenerate.t = 0.0;
    CHECK(ExpPoly::indicator(degenerate).integrate() == 0.0);
}

TEST_CASE("degree guard and parameter validation") {
    CHECK_THROWS_AS(ExpPoly::term(kBase, {17, 0, 0}, 1.0), std::domain_error);
    const auto big = ExpPoly::term(kBase, {10, 8, -8}, 1.0);
    CHECK_THROWS_AS(big * big, std::domain_error);

    KernelParams bad = kBase;
    bad.a = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = kBase;
    bad.nu = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}
