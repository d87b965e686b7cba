#include "doctest.h"

#include "heunlock/errors.hpp"
#include "heunlock/torusflow.hpp"
#include "heunlock/xiprod.hpp"
#include "oracles/oracle_values.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace heunlock;

namespace {

constexpr double kPi = std::numbers::pi;

double closed_form_rho(double B, double omega)
{
    return std::sqrt(std::max(B * B - 1.0, 0.0)) / omega;
}

} // namespace

TEST_CASE("JosephsonParams derived quantities")
{
    const JosephsonParams p(0.7, 1.4, 2.1);
    CHECK(p.l() == doctest::Approx(2.0));
    CHECK(p.mu() == doctest::Approx(1.5));
    CHECK(p.lambda() == doctest::Approx(1.0 / 1.96 - 2.25));
    CHECK(p.heun().l == 2);
    CHECK_THROWS_AS(JosephsonParams(0.7, 1.0, 2.0).heun(), DomainError);
    CHECK_THROWS_AS(JosephsonParams(0.0, 1.0, 2.0), DomainError);
}

TEST_CASE("flow_step against the autonomous solution")
{
    // B = A = 0: tan(phi/2) = tan(phi0/2) exp(-tau/omega).
    const double omega = 0.9;
    const JosephsonParams p(omega, 0.0, 0.0);
    for (double phi0 : {0.4, 1.5, 2.8}) {
        const double tau = 1.7;
        const double exact = 2.0 * std::atan(std::tan(0.5 * phi0) * std::exp(-tau / omega));
        CHECK(std::abs(flow_step(p, phi0, 0.0, tau, 1e-12) - exact) < 1e-9);
    }
}

TEST_CASE("rotation number closed form at A = 0")
{
    const double omega = 0.7;
    for (double B : {0.5, 1.5, 2.0, 3.0}) {
        const auto r = rotation_number(JosephsonParams(omega, B, 0.0), 2000);
        CHECK(std::abs(r.rho - closed_form_rho(B, omega)) < 1e-3);
        CHECK(std::abs(r.rho - closed_form_rho(B, omega)) <= r.conf);
        CHECK(r.periods == 2000);
        const auto f = rotation_number_fast(JosephsonParams(omega, B, 0.0), 2000);
        CHECK(std::abs(f.rho - closed_form_rho(B, omega)) < 1e-8);
    }
    CHECK_THROWS_AS(rotation_number(JosephsonParams(omega, 1.0, 0.0), 10), DomainError);
}

TEST_CASE("rotation number: fast and direct agree")
{
    for (const auto& p : {JosephsonParams(0.7, 1.1, 2.0), JosephsonParams(0.7, -2.3, 4.5),
                          JosephsonParams(0.5, 0.6, 1.0)}) {
        const auto d = rotation_number(p, 400, 1e-12);
        const auto f = rotation_number_fast(p, 400);
        CHECK(std::abs(d.rho - f.rho) < 1e-8);
    }
}

TEST_CASE("rotation estimator conf shrinks with more periods")
{
    const JosephsonParams p(0.7, 1.3, 1.0);
    const auto a = rotation_number_fast(p, 500);
    const auto b = rotation_number_fast(p, 1000);
    CHECK(b.conf < a.conf);
    CHECK(std::abs(a.rho - b.rho) < a.conf);
}

TEST_CASE("birkhoff weights and lift averaging")
{
    CHECK(birkhoff_weight(0.0) == 0.0);
    CHECK(birkhoff_weight(1.0) == 0.0);
    CHECK(birkhoff_weight(0.5) == doctest::Approx(std::exp(-4.0)));
    std::vector<double> lifts;
    for (int k = 0; k <= 300; ++k)
        lifts.push_back(2 * kPi * 0.37 * k + 0.2 * std::sin(2 * kPi * 0.37 * k));
    const auto r = rotation_from_lifts(lifts, 1e-12);
    CHECK(std::abs(r.rho - 0.37) < 1e-8);
    CHECK(r.periods == 300);
}

TEST_CASE("monodromy at A = 0 against the matrix exponential")
{
    for (const auto& c : oracle::monodromy_A0) {
        const auto M = monodromy(JosephsonParams(c.omega, c.B, 0.0));
        double scale = 0.0, err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const std::complex<double> ref(c.re[i], c.im[i]);
            scale = std::max(scale, std::abs(ref));
            err = std::max(err, std::abs(M.m[static_cast<std::size_t>(i)] - ref));
        }
        CHECK(err < 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("monodromy: Liouville determinant, inverse, U(1,1)")
{
    for (const auto& p : {JosephsonParams(0.7, 0.35, 1.3), JosephsonParams(0.7, 1.4, 5.0),
                          JosephsonParams(0.9, -0.4, 2.2)}) {
        const auto M = monodromy(p);
        CHECK(std::abs(M.det() - M.liouville_det(p.l())) < 1e-8);
        CHECK((M * monodromy_reverse(p)).distance_to_identity() < 1e-8);
        // Symmetry of the real torus field: |m11| = |m22|, |m12| = |m21|.
        CHECK(std::abs(std::abs(M.m[0]) - std::abs(M.m[3])) < 1e-8 * std::abs(M.m[0]));
        CHECK(std::abs(std::abs(M.m[1]) - std::abs(M.m[2])) < 1e-8 * std::abs(M.m[0]));
    }
}

TEST_CASE("period map reproduces direct integration")
{
    for (const auto& p : {JosephsonParams(0.7, 0.7, 2.0), JosephsonParams(0.7, -1.7, 3.1),
                          JosephsonParams(0.4, 2.5, 0.8)}) {
        const PeriodMap F(p);
        for (double phi : {-2.0, 0.0, 0.9, 3.0}) {
            CAPTURE(phi);
            CHECK(std::abs(F(phi) - flow_step(p, phi, 0.0, 2 * kPi, 1e-12)) < 1e-8);
        }
    }
}

TEST_CASE("monodromy is the identity at adjacencies and not next to them")
{
    for (const auto& o : oracle::line_roots) {
        const JosephsonParams p(o.omega, o.l * o.omega, o.A);
        CHECK(monodromy(p).distance_to_identity() < 1e-6);
        CHECK(monodromy(JosephsonParams(o.omega, o.l * o.omega, o.A + 0.1)).distance_to_identity() > 1e-3);
    }
}

TEST_CASE("adjacency_verify")
{
    for (const auto& o : oracle::line_roots) {
        const auto r = adjacency_verify(o.l, o.omega, o.A);
        CHECK(r.parity_constraint);
        CHECK(r.magnitude_constraint);
        CHECK(r.rho_equals_l);
        CHECK(std::abs(r.rho - o.l) < 1e-3);
        CHECK(r.monodromy_distance < 1e-6);
        CHECK(std::abs(r.entire_solution_defect) < 1e-6);
        CHECK(r.to_json().find("\"monodromy_distance\"") != std::string::npos);
    }
}

TEST_CASE("phase-lock interval at A = 0")
{
    LockSearchOptions opt;
    opt.fast = true;
    const auto z = phase_lock_interval(0, 0.0, 0.7, 1e-8, opt);
    REQUIRE(!z.empty);
    CHECK(z.lo == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(z.hi == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(z.reliable);
    // At A = 0 the level rho = 1 is hit at a single B; only the rho_tol
    // window around it, of width about 2 rho_tol / rho'(B), is reported.
    const auto one = phase_lock_interval(1, 0.0, 0.7, 1e-9, opt);
    CHECK(one.width() < 1e-5);
}

TEST_CASE("phase-lock interval of the first area")
{
    LockSearchOptions opt;
    opt.fast = true;
    const auto z = phase_lock_interval(1, 2.5, 0.7, 1e-8, opt);
    REQUIRE(!z.empty);
    CHECK(z.lo < 0.7);
    CHECK(z.hi > 0.7);
    for (double B : {z.lo + 0.25 * z.width(), z.hi - 0.25 * z.width()})
        CHECK(std::abs(rotation_number_fast(JosephsonParams(0.7, B, 2.5), 400).rho - 1.0) < 1e-6);
}

TEST_CASE("level-set width at A = 0")
{
    // Targets far from low-order rationals, where the weighted average
    // converges quickly; near p/q it is only good to conf.
    const double omega = 0.7, delta = 1e-4;
    LockSearchOptions opt;
    opt.fast = true;
    opt.periods = 2000;
    for (double target : {0.6180339887, 1.4142135624}) {
        const double lo = std::sqrt(1.0 + std::pow(omega * (target - delta), 2));
        const double hi = std::sqrt(1.0 + std::pow(omega * (target + delta), 2));
        const auto w = level_set_width(target, 0.0, omega, delta, 1e-10, opt);
        CHECK(w.lo == doctest::Approx(lo).epsilon(1e-6));
        CHECK(w.hi == doctest::Approx(hi).epsilon(1e-6));
        CHECK(w.width == doctest::Approx(hi - lo).epsilon(0.05));
    }
}
