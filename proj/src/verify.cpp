#include "heunlock/verify.hpp"

#include "heunlock/errors.hpp"
#include "heunlock/heunrec.hpp"
#include "heunlock/mpreal.hpp"
#include "heunlock/specfun.hpp"
#include "heunlock/xiprod.hpp"
#include "heunlock/youngdet.hpp"

#include "json.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace heunlock {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult check(std::string name, bool ok, std::string detail)
{
    return {std::move(name), ok, std::move(detail)};
}

// I_j at x in 128-bit arithmetic, for difference quotients.
MpReal bessel_mp(int j, double x)
{
    return bessel_series<MpReal>(std::abs(j), x, 128, 1e-30).value;
}

} // namespace

bool SuiteResult::pass() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

std::string SuiteResult::to_json() const
{
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["pass"] = pass();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = arr;
    return j.dump(2);
}

SuiteResult verify_bessel()
{
    SuiteResult s{"bessel", {}};
    const double xs_d[] = {0.5, 1.0, 5.0, 10.0};

    {
        // Centered difference with h = 1e-5 against (I_{j-1} + I_{j+1})/2.
        // The truncation term h^2 I'''/6 grows like I_j(x), so the residual is
        // measured relative to max(1, |rhs|); the absolute value is reported.
        const double h = 1e-5;
        double worst_rel = 0.0, worst_abs = 0.0;
        for (double x : xs_d)
            for (int j = 0; j <= 20; ++j) {
                const MpReal fd = (bessel_mp(j, x + h) - bessel_mp(j, x - h)) / (2.0 * h);
                const MpReal rhs = (bessel_mp(j - 1, x) + bessel_mp(j + 1, x)) / 2.0;
                const double r = abs(fd - rhs).to_double();
                worst_abs = std::max(worst_abs, r);
                worst_rel = std::max(worst_rel, r / std::max(1.0, std::abs(rhs.to_double())));
            }
        s.checks.push_back(check("derivative_identity", worst_rel < 1e-8,
                                 "max scaled residual " + fmt(worst_rel) + ", max absolute " +
                                     fmt(worst_abs)));
    }
    {
        double worst = 0.0;
        for (double x : {1.0, 2.0, 5.0}) {
            const auto t = bessel_table(40, x);
            for (int q = 0; q < 8; ++q) {
                const auto z = std::polar(1.0, 2.0 * std::numbers::pi * q / 8.0);
                std::complex<double> sum = t.at(0);
                for (int j = 1; j <= 40; ++j)
                    sum += t.at(j) * (std::pow(z, j) + std::pow(z, -j));
                const auto exact = std::exp(0.5 * x * (z + 1.0 / z));
                worst = std::max(worst, std::abs(sum - exact));
            }
        }
        s.checks.push_back(check("generating_function", worst < 1e-10, "max error " + fmt(worst)));
    }
    {
        double worst = 0.0;
        for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            const auto miller = bessel_table_miller(30, x);
            for (int j = 0; j <= 30; ++j) {
                const double a = bessel_i(j, x);
                const double b = bessel_integral_oracle(j, x, 256);
                const double c = miller[static_cast<std::size_t>(j)];
                worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
            }
        }
        s.checks.push_back(check("cross_oracles", worst < 1e-11, "max pairwise difference " + fmt(worst)));
    }
    {
        bool ok = true;
        for (double x : {0.1, 0.5, 1.0, 5.0, 10.0, 50.0})
            for (int j = -60; j <= 60; ++j)
                ok = ok && bessel_i(j, x) > 0.0;
        s.checks.push_back(check("positivity", ok, "j in [-60, 60], x from 0.1 to 50"));
    }
    {
        const auto t = bessel_table(40, 5.0);
        double sum = t.at(0);
        for (int j = 1; j <= 40; ++j)
            sum += 2.0 * t.at(j);
        const double d = std::abs(sum - std::exp(5.0));
        s.checks.push_back(check("normalization", d < 1e-10, "|I_0 + 2 sum I_j - e^5| = " + fmt(d)));
    }
    {
        const bool ok = bessel_i(25, 5.0) < bessel_tail_bound(25, 5.0) &&
                        std::abs(bessel_tail_bound(4, 2.0) - 2.0 / 3.0) < 1e-15;
        s.checks.push_back(check("tail_bound", ok, "I_25(5) below 5^25/25!"));
    }
    return s;
}

SuiteResult verify_positivity_l2()
{
    SuiteResult s{"positivity-l2", {}};
    {
        const double xs[] = {1.0};
        const auto r = positivity_scan(1, 3, xs);
        s.checks.push_back(check("l1_radius3", r.all_positive() && r.entries.size() == 49,
                                 std::to_string(r.entries.size()) + " pairs"));
    }
    {
        const double xs[] = {0.1, 1.0, 5.0, 10.0};
        const auto r = positivity_scan(2, 6, xs);
        std::ostringstream os;
        os << r.entries.size() << " triples, " << r.unresolved << " unresolved, " << r.nonpositive
           << " non-positive, min " << fmt(r.min_value);
        s.checks.push_back(check("l2_radius6", r.all_positive(), os.str()));
    }
    return s;
}

SuiteResult verify_heun_exclusion()
{
    SuiteResult s{"heun-exclusion", {}};
    for (int l = 1; l <= 3; ++l)
        for (double mu : {0.5, 1.0, 2.0}) {
            for (double lambda : poly_existence_lambdas(l, mu)) {
                std::ostringstream tag;
                tag << "l=" << l << " mu=" << mu << " lambda=" << lambda;
                const HeunParams p(l, lambda, mu);
                const auto poly = poly_solution_heun2(p);
                if (poly.status != PolyStatus::exists || !poly.solution) {
                    s.checks.push_back(check(tag.str(), false, "no polynomial solution at root"));
                    continue;
                }
                const auto& e = *poly.solution;
                double res = 0.0;
                for (auto z : {std::complex<double>(0.5, 0.0), std::complex<double>(-0.3, 0.7),
                               std::complex<double>(1.0, 1.0)})
                    res = std::max(res, heun2_residual(e.coeffs, p, z));
                const auto xi = xi_l(p);
                const auto delta = delta_det(l, 2.0 * mu);
                const auto paths = romb_laurent_paths(e, mu, l);
                double cmax = 0.0, pdiff = 0.0;
                for (int i = 0; i < l; ++i) {
                    const auto ui = static_cast<std::size_t>(i);
                    cmax = std::max(cmax, std::abs(paths.convolution[ui]));
                    pdiff = std::max(pdiff, std::abs(paths.convolution[ui] - paths.matrix[ui]));
                }
                const int N = default_backward_depth(p);
                const double d1 = entire_solution_defect(p, N);
                const double d2 = entire_solution_defect(p, 2 * N);
                const bool defect_ok = std::abs(d1) > 1e-6 && std::abs(d2 - d1) < 1e-3 * std::abs(d1);
                const bool ok = res < 1e-9 && e.degree() == l - 1 && xi.certified_sign() != 0 &&
                                delta.sign == Sign::positive && cmax >= 1e-12 && pdiff < 1e-10 &&
                                defect_ok;
                std::ostringstream d;
                d << "xi=" << xi.value << "+-" << fmt(xi.err) << " delta=" << delta.value
                  << " max|c|=" << fmt(cmax) << " paths=" << fmt(pdiff) << " defect=" << d1 << "/"
                  << d2 << " heun2_res=" << fmt(res) << " deg=" << e.degree();
                s.checks.push_back(check(tag.str(), ok, d.str()));
            }
        }
    return s;
}

std::vector<std::string> suite_names() { return {"bessel", "positivity-l2", "heun-exclusion"}; }

SuiteResult run_suite(const std::string& name)
{
    if (name == "bessel")
        return verify_bessel();
    if (name == "positivity-l2")
        return verify_positivity_l2();
    if (name == "heun-exclusion")
        return verify_heun_exclusion();
    throw DomainError("unknown suite '" + name + "' (bessel, positivity-l2, heun-exclusion)");
}

} // namespace heunlock
