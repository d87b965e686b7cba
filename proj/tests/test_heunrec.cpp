#include "doctest.h"

#include "heunlock/errors.hpp"
#include "heunlock/heunrec.hpp"
#include "heunlock/specfun.hpp"
#include "heunlock/xiprod.hpp"
#include "oracles/oracle_values.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace heunlock;
using C = std::complex<double>;

namespace {

const C kSamples[] = {C(0.0, 0.0), C(0.5, 0.0), C(-0.3, 0.6), C(0.0, -1.0), C(0.6, 0.8)};

// l = 0, lambda = -mu^2: E(z) = exp(mu z) solves the first equation.
TaylorSolution exp_series(double mu, int N)
{
    TaylorSolution s;
    s.N = N;
    s.coeffs.resize(static_cast<std::size_t>(N) + 1);
    double a = 1.0;
    for (int n = 0; n <= N; ++n) {
        s.coeffs[static_cast<std::size_t>(n)] = a;
        a *= mu / (n + 1);
    }
    return s;
}

} // namespace

// Runs first: everything downstream relies on the derived recurrence.
TEST_CASE("recurrence validated by the residual of the first equation")
{
    // A backward solution satisfies every relation with n >= 1, so the
    // left-hand side reduces to its constant term mu a_1 + lambda a_0.
    for (const HeunParams p : {HeunParams(0, 0.3, 0.7), HeunParams(1, 0.3, 1.2), HeunParams(2, -3.0, 2.0),
                               HeunParams(3, 1.5, 0.4), HeunParams(1, -10.0, 3.0)}) {
        const auto sol = backward_taylor_heun1(p, 160);
        const double c0 = std::abs(p.mu * sol.coeffs[1] + p.lambda * sol.coeffs[0]);
        CHECK(c0 > 1e-6);
        for (const C z : kSamples)
            CHECK(std::abs(heun1_residual(sol, p, z, 160) - c0) < 1e-10);
    }
}

TEST_CASE("exp(mu z) is an entire solution at l = 0, lambda = -mu^2")
{
    for (double mu : {0.5, 1.0, 3.0}) {
        const HeunParams p(0, -mu * mu, mu);
        const auto e = exp_series(mu, 120);
        for (const C z : kSamples)
            CHECK(heun1_residual(e, p, z, 120) < 1e-10);

        const auto b = backward_taylor_heun1(p, 200);
        const double s = b.coeffs[0];
        for (int n = 0; n <= 30; ++n)
            CHECK(b.coeffs[static_cast<std::size_t>(n)] / s ==
                  doctest::Approx(e.coeffs[static_cast<std::size_t>(n)]).epsilon(1e-10));
        for (const C z : kSamples)
            CHECK(heun1_residual(b, p, z, 200) < 1e-10);
        CHECK(std::abs(entire_solution_defect(p, 200)) < 1e-12);
    }
}

TEST_CASE("recurrence coefficients")
{
    const HeunParams p0(0, 0.7, 1.3);
    const auto r0 = recurrence_coeffs_heun1(0, p0);
    CHECK(r0.c_plus == doctest::Approx(1.3));
    CHECK(r0.c_zero == doctest::Approx(0.7));
    const auto r1 = recurrence_coeffs_heun1(1, p0);
    CHECK(r1.c_plus == doctest::Approx(2.6));
    CHECK(r1.c_zero == doctest::Approx(1.7));
    CHECK(r1.c_minus == doctest::Approx(-1.3));
    const HeunParams p3(3, 0.7, 1.3);
    for (int n = 0; n < 20; ++n) {
        CHECK(recurrence_coeffs_heun1(n, p3).c_plus > 0.0);
        const auto a = recurrence_coeffs_heun1(n, p0), b = recurrence_coeffs_heun2(n, p0);
        CHECK(a.c_plus == b.c_plus);
        CHECK(a.c_zero == b.c_zero);
        CHECK(a.c_minus == b.c_minus);
    }
    CHECK(recurrence_coeffs_heun2(3, p3).c_minus == 0.0);
    CHECK(recurrence_coeffs_heun2(0, p3).c_plus == doctest::Approx(1.3));
    CHECK(recurrence_coeffs_heun2(0, p3).c_zero == doctest::Approx(0.7));
}

TEST_CASE("HeunParams validation")
{
    CHECK_THROWS_AS(HeunParams(-1, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(HeunParams(0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(HeunParams(0, std::nan(""), 1.0), DomainError);
}

TEST_CASE("heun1_residual edge cases")
{
    const HeunParams p(1, 0.3, 0.5);
    TaylorSolution zero;
    zero.N = 40;
    zero.coeffs.assign(41, 0.0);
    CHECK(heun1_residual(zero, p, C(0.7, 0.2), 40) == 0.0);
    CHECK_THROWS_AS(heun1_residual(zero, p, C(1.5, 0.0), 40), DomainError);
}

TEST_CASE("forward recurrence diverges for generic parameters")
{
    const HeunParams p(1, 1.0, 0.3);
    const auto sol = forward_taylor_heun1(p, 80);
    CHECK(heun1_residual(sol, p, C(1.0, 0.0), 80) > 1.0);
}

TEST_CASE("defect at generic parameters stays away from zero")
{
    const HeunParams p(1, 1.0, 0.3);
    const double d1 = entire_solution_defect(p, 200);
    const double d2 = entire_solution_defect(p, 400);
    const double d3 = entire_solution_defect(p, 800);
    CHECK(std::abs(d1) > 1e-3);
    CHECK(std::abs(d2 - d1) < 1e-8 * std::abs(d1));
    CHECK(std::abs(d3 - d2) < 1e-8 * std::abs(d1));
    CHECK_THROWS_AS(entire_solution_defect(HeunParams(2, 1.0, 1.0), 60), DomainError);
}

TEST_CASE("defect vanishes at xi roots on a lambda grid")
{
    // Sign changes of xi_1 in lambda at mu = 0.5 bracket the defect zeros.
    const double mu = 0.5;
    double prevx = xi_l(1, -12.0, mu).value;
    double prevd = entire_solution_defect(HeunParams(1, -12.0, mu), 400);
    int roots = 0;
    for (int i = 1; i <= 240; ++i) {
        const double lam = -12.0 + 0.05 * i;
        const double x = xi_l(1, lam, mu).value;
        const double d = entire_solution_defect(HeunParams(1, lam, mu), 400);
        if ((x > 0) != (prevx > 0)) {
            ++roots;
            CHECK((d > 0) != (prevd > 0));
        } else {
            CHECK((d > 0) == (prevd > 0));
        }
        prevx = x;
        prevd = d;
    }
    CHECK(roots >= 2);
}

TEST_CASE("extended-precision defect changes sign at the Josephson-line roots")
{
    // Includes a root at mu ~ 12, where the double run is too noisy to locate it.
    for (const auto& o : oracle::line_roots) {
        const auto lo = josephson_heun_params(o.l, o.omega, o.A - 1e-7);
        const auto hi = josephson_heun_params(o.l, o.omega, o.A + 1e-7);
        const auto prec = Precision::extended(128);
        const double dlo = entire_solution_defect(lo, default_backward_depth(lo), prec);
        const double dhi = entire_solution_defect(hi, default_backward_depth(hi), prec);
        CHECK((dlo > 0) != (dhi > 0));
    }
}

TEST_CASE("backward solutions at different depths agree up to scale")
{
    const HeunParams p(2, -3.0, 1.5);
    const auto a = backward_taylor_heun1(p, 200);
    const auto b = backward_taylor_heun1(p, 400);
    const double s = b.coeffs[0] / a.coeffs[0];
    for (int n = 0; n <= 60; ++n)
        CHECK(std::abs(b.coeffs[static_cast<std::size_t>(n)] - s * a.coeffs[static_cast<std::size_t>(n)]) <
              1e-8 * std::abs(b.coeffs[0]));
}

TEST_CASE("defect auto depth")
{
    const auto d = entire_solution_defect_auto(HeunParams(1, 1.0, 0.3));
    CHECK(d.stable);
    CHECK(d.N >= 200);
    CHECK(default_backward_depth(HeunParams(3, 10.0, 5.0)) == 410);
}

TEST_CASE("polynomial solutions of the second equation")
{
    // l = 1: the single relation is lambda a_0 = 0.
    const auto p1 = poly_solution_heun2(HeunParams(1, 0.0, 0.8));
    REQUIRE(p1.status == PolyStatus::exists);
    CHECK(p1.solution->coeffs == std::vector<double>{1.0});
    CHECK(poly_solution_heun2(HeunParams(1, 0.3, 0.8)).status == PolyStatus::none);

    // l = 2: det [[lambda, mu], [mu, lambda - 1]] = lambda^2 - lambda - mu^2.
    const auto lams = poly_existence_lambdas(2, 1.0);
    REQUIRE(lams.size() == 2);
    CHECK(lams[0] == doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-13));
    CHECK(lams[1] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
    for (double lam : lams) {
        CHECK(std::abs(heun2_system_determinant(2, lam, 1.0)) < 1e-12);
        const auto o = poly_solution_heun2(HeunParams(2, lam, 1.0));
        REQUIRE(o.status == PolyStatus::exists);
        CHECK(o.solution->degree() == 1);
        for (const C z : kSamples)
            CHECK(heun2_residual(o.solution->coeffs, HeunParams(2, lam, 1.0), z) < 1e-12);
    }

    for (int l = 1; l <= 4; ++l) {
        for (double mu : {0.5, 1.0, 2.0}) {
            const auto ls = poly_existence_lambdas(l, mu);
            CHECK(ls.size() == static_cast<std::size_t>(l));
            for (double lam : ls) {
                const auto o = poly_solution_heun2(HeunParams(l, lam, mu));
                REQUIRE(o.status == PolyStatus::exists);
                CHECK(o.solution->degree() == l - 1);
                for (const C z : kSamples)
                    CHECK(heun2_residual(o.solution->coeffs, HeunParams(l, lam, mu), z) <
                          1e-9 * std::max(1.0, std::abs(lam)));
            }
        }
    }
    CHECK_THROWS_AS(poly_solution_heun2(HeunParams(0, 0.0, 1.0)), DomainError);
}

TEST_CASE("Laurent coefficients of the transformed polynomial")
{
    for (double mu : {0.5, 1.0, 2.0}) {
        PolySolution one;
        one.coeffs = {1.0};
        const auto c = romb_laurent_coeffs(one, mu, 1);
        REQUIRE(c.size() == 1);
        CHECK(c[0] == doctest::Approx(bessel_i(1, 2.0 * mu)).epsilon(1e-12));
    }
    for (int l = 2; l <= 3; ++l) {
        for (double lam : poly_existence_lambdas(l, 1.0)) {
            const auto o = poly_solution_heun2(HeunParams(l, lam, 1.0));
            const auto paths = romb_laurent_paths(*o.solution, 1.0, l);
            double scale = 0.0, diff = 0.0;
            for (std::size_t i = 0; i < paths.convolution.size(); ++i) {
                scale = std::max(scale, std::abs(paths.convolution[i]));
                diff = std::max(diff, std::abs(paths.convolution[i] - paths.matrix[i]));
            }
            CHECK(scale > 1e-12);
            CHECK(diff < 1e-10 * std::max(1.0, scale));
        }
    }
    PolySolution zero;
    zero.coeffs = {0.0, 0.0};
    for (double v : romb_laurent_coeffs(zero, 1.0, 2))
        CHECK(v == 0.0);
}

TEST_CASE("delta_det")
{
    const auto d1 = delta_det(1, 2.0);
    CHECK(d1.value == doctest::Approx(1.5906368546373290634).epsilon(1e-14));
    const double i0 = bessel_i(0, 2.0), i1 = bessel_i(1, 2.0), i2 = bessel_i(2, 2.0);
    const auto d2 = delta_det(2, 2.0);
    CHECK(d2.value == doctest::Approx(i1 * i1 - i0 * i2).epsilon(1e-12));
    CHECK(d2.sign == Sign::positive);
    CHECK(delta_det(3, 0.1).sign == Sign::positive);
}

TEST_CASE("solution_csv")
{
    const auto s = forward_taylor_heun1(HeunParams(0, 0.5, 1.0), 3);
    const auto csv = solution_csv(s);
    CHECK(csv.rfind("n,a_n\n0,1\n", 0) == 0);
}
