#include "heunlock/heunrec.hpp"

#include "heunlock/errors.hpp"
#include "heunlock/mpreal.hpp"
#include "heunlock/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace heunlock {

HeunParams::HeunParams(int l_, double lambda_, double mu_) : l(l_), lambda(lambda_), mu(mu_)
{
    if (l < 0)
        throw DomainError("Heun parameter l must be nonnegative");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw DomainError("Heun parameter mu must be positive");
    if (!std::isfinite(lambda))
        throw DomainError("Heun parameter lambda must be finite");
}

RecurrenceCoeffs recurrence_coeffs_heun1(int n, const HeunParams& p)
{
    const double nn = n;
    return {p.mu * (nn + 1.0), nn * (nn + p.l) + p.lambda, -p.mu * (nn + p.l)};
}

RecurrenceCoeffs recurrence_coeffs_heun2(int n, const HeunParams& p)
{
    const double nn = n;
    return {p.mu * (nn + 1.0), nn * (nn - p.l) + p.lambda, -p.mu * (nn - p.l)};
}

TaylorSolution forward_taylor_heun1(const HeunParams& p, int N)
{
    if (N < 1)
        throw DomainError("forward_taylor_heun1 needs N >= 1");
    TaylorSolution s;
    s.N = N;
    s.coeffs.assign(static_cast<std::size_t>(N) + 1, 0.0);
    s.coeffs[0] = 1.0;
    double prev = 0.0;
    for (int n = 0; n < N; ++n) {
        const auto c = recurrence_coeffs_heun1(n, p);
        const double an = s.coeffs[static_cast<std::size_t>(n)];
        s.coeffs[static_cast<std::size_t>(n) + 1] = -(c.c_zero * an + c.c_minus * prev) / c.c_plus;
        prev = an;
    }
    s.normalization = TaylorSolution::Normalization::leading_one;
    s.boundary_defect = 0.0;
    return s;
}

namespace {

template <class Real>
struct BackwardRun {
    std::vector<Real> a;
    Real residual; // mu a_1 + lambda a_0 with max |a| = 1
};

// Miller-style backward run. In double precision the partial vector is
// rescaled whenever it threatens to overflow; entries far above the current
// index then underflow harmlessly, since the minimal solution decays there.
template <class Real>
BackwardRun<Real> run_backward(const HeunParams& p, int N, unsigned bits)
{
    using std::abs;
    std::vector<Real> a(static_cast<std::size_t>(N) + 2, make_real<Real>(0.0, bits));
    a[static_cast<std::size_t>(N)] = make_real<Real>(1.0, bits);
    // Below n ~ mu the wanted solution decays in the direction of travel, so
    // errors in the coefficients are amplified by about (max|a| / |a_0|)^2.
    // In extended mode the coefficients are therefore formed in Real as well.
    const Real lam = make_real<Real>(p.lambda, bits), mu = make_real<Real>(p.mu, bits);
    for (int n = N; n >= 1; --n) {
        const auto un = static_cast<std::size_t>(n);
        Real next = make_real<Real>(0.0, bits);
        if constexpr (std::is_same_v<Real, double>) {
            const auto c = recurrence_coeffs_heun1(n, p);
            next = (a[un + 1] * c.c_plus + a[un] * c.c_zero) / -c.c_minus;
        } else {
            Real c_zero = make_real<Real>(static_cast<double>(n) * (n + p.l), bits);
            c_zero += lam;
            Real c_plus = mu * static_cast<double>(n + 1);
            Real neg_c_minus = mu * static_cast<double>(n + p.l);
            next = a[un + 1] * c_plus + a[un] * c_zero;
            next /= neg_c_minus;
        }
        a[un - 1] = std::move(next);
        if constexpr (std::is_same_v<Real, double>) {
            if (std::abs(a[un - 1]) > 1e150) {
                for (std::size_t k = un - 1; k < a.size(); ++k)
                    a[k] *= 1e-150;
            }
        }
    }
    Real amax = make_real<Real>(0.0, bits);
    for (const auto& v : a)
        if (abs(v) > amax)
            amax = abs(v);
    for (auto& v : a)
        v /= amax;
    Real residual = a[1] * mu + a[0] * lam;
    a.pop_back();
    return {std::move(a), std::move(residual)};
}

double defect_scale(const HeunParams& p) { return p.mu * std::max(p.l, 1); }

} // namespace

TaylorSolution backward_taylor_heun1(const HeunParams& p, int N)
{
    if (N < 2)
        throw DomainError("backward_taylor_heun1 needs N >= 2");
    auto run = run_backward<double>(p, N, 53);
    TaylorSolution s;
    s.N = N;
    s.coeffs = std::move(run.a);
    s.normalization = TaylorSolution::Normalization::unit_max;
    s.boundary_defect = run.residual / defect_scale(p);
    return s;
}

double heun1_residual(const TaylorSolution& sol, const HeunParams& p, std::complex<double> z,
                      int trunc)
{
    if (trunc < 0 || trunc > sol.N)
        throw DomainError("heun1_residual needs 0 <= trunc <= N");
    if (std::abs(z) > 1.0 + 1e-12)
        throw DomainError("heun1_residual needs |z| <= 1");
    std::complex<double> e = 0.0, de = 0.0, dde = 0.0;
    // Horner for E, E', E'' simultaneously.
    for (int n = trunc; n >= 0; --n) {
        dde = dde * z + 2.0 * de;
        de = de * z + e;
        e = e * z + sol.coeffs[static_cast<std::size_t>(n)];
    }
    const double l1 = p.l + 1.0;
    const auto lhs = z * z * dde + (l1 * z + p.mu * (1.0 - z * z)) * de +
                     (p.lambda - p.mu * l1 * z) * e;
    return std::abs(lhs);
}

double heun2_residual(const std::vector<double>& coeffs, const HeunParams& p,
                      std::complex<double> z)
{
    std::complex<double> e = 0.0, de = 0.0, dde = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 0;) {
        dde = dde * z + 2.0 * de;
        de = de * z + e;
        e = e * z + coeffs[n];
    }
    const double l1 = 1.0 - p.l;
    const auto lhs = z * z * dde + (l1 * z + p.mu * (1.0 - z * z)) * de +
                     (p.lambda + p.mu * (p.l - 1.0) * z) * e;
    return std::abs(lhs);
}

double entire_solution_defect(const HeunParams& p, int N, const Precision& prec)
{
    if (N < 50 + 10 * p.l)
        throw DomainError("entire_solution_defect needs N >= 50 + 10 l");
    if (prec.is_extended()) {
        auto run = run_backward<MpReal>(p, N, prec.bits);
        return run.residual.to_double() / defect_scale(p);
    }
    auto run = run_backward<double>(p, N, 53);
    return run.residual / defect_scale(p);
}

int default_backward_depth(const HeunParams& p)
{
    const double growth = std::ceil(std::abs(p.lambda) + p.mu * p.mu);
    return std::max(200, static_cast<int>(20 * p.l + 10 * growth));
}

DefectEstimate entire_solution_defect_auto(const HeunParams& p, int max_doublings)
{
    int N = default_backward_depth(p);
    double prev = entire_solution_defect(p, N);
    for (int i = 0; i < max_doublings; ++i) {
        N *= 2;
        const double cur = entire_solution_defect(p, N);
        if (std::abs(cur - prev) <= 0.01 * std::abs(cur) || std::abs(cur - prev) <= 1e-14)
            return {cur, N, true};
        prev = cur;
    }
    return {prev, N, false};
}

int PolySolution::degree() const
{
    for (std::size_t n = coeffs.size(); n-- > 0;)
        if (coeffs[n] != 0.0)
            return static_cast<int>(n);
    return -1;
}

double heun2_system_determinant(int l, double lambda, double mu)
{
    if (l < 1)
        throw DomainError("heun2 polynomial system needs l >= 1");
    // Continuant of the tridiagonal matrix with diagonal n(n-l) + lambda,
    // superdiagonal mu(n+1) and subdiagonal mu(l-n).
    double q_prev = 1.0;
    double q = lambda; // n = 0 diagonal
    for (int n = 1; n < l; ++n) {
        const double diag = n * (n - l) + lambda;
        const double coupling = (mu * n) * (mu * (l - n)); // T[n-1][n] T[n][n-1]
        const double next = diag * q - coupling * q_prev;
        q_prev = q;
        q = next;
    }
    return q;
}

namespace {

// Max-norm of the relations n = 0..l-1 as an l x (l+1) block over a_0..a_l,
// i.e. including the mu l coefficient of the truncated a_l. For l = 1 the
// square system alone is [lambda], which has no scale at lambda = 0.
double system_scale(const HeunParams& p)
{
    double s = p.mu * p.l;
    for (int n = 0; n < p.l; ++n) {
        s = std::max(s, std::abs(n * (n - p.l) + p.lambda));
        s = std::max(s, p.mu * (n + 1));
        if (n > 0)
            s = std::max(s, p.mu * (p.l - n));
    }
    return s;
}

} // namespace

PolyOutcome poly_solution_heun2(const HeunParams& p, const Precision&)
{
    if (p.l < 1)
        throw DomainError("poly_solution_heun2 needs l >= 1");
    PolyOutcome out;
    out.determinant = heun2_system_determinant(p.l, p.lambda, p.mu);
    out.scale = system_scale(p);
    const double unit = std::pow(std::max(out.scale, 1e-300), p.l);
    const double rel = std::abs(out.determinant) / unit;
    if (rel >= 1e-6) {
        out.status = PolyStatus::none;
        return out;
    }
    if (rel >= 1e-10) {
        out.status = PolyStatus::undetermined;
        std::ostringstream os;
        os << "determinant " << out.determinant << " is small (" << rel
           << " of scale^l) but above the zero threshold; refine lambda";
        out.diagnostic = os.str();
        return out;
    }
    // Kernel vector by forward substitution from a_0 = 1; the relations
    // n = 0..l-2 determine a_1..a_{l-1}, relation l-1 is the residual.
    PolySolution sol;
    sol.coeffs.assign(static_cast<std::size_t>(p.l), 0.0);
    sol.coeffs[0] = 1.0;
    double prev = 0.0;
    for (int n = 0; n + 1 < p.l; ++n) {
        const auto c = recurrence_coeffs_heun2(n, p);
        const double an = sol.coeffs[static_cast<std::size_t>(n)];
        sol.coeffs[static_cast<std::size_t>(n) + 1] = -(c.c_zero * an + c.c_minus * prev) / c.c_plus;
        prev = an;
    }
    {
        const int n = p.l - 1;
        const auto c = recurrence_coeffs_heun2(n, p);
        const double an = sol.coeffs[static_cast<std::size_t>(n)];
        const double am = n > 0 ? sol.coeffs[static_cast<std::size_t>(n) - 1] : 0.0;
        double amax = 0.0;
        for (double v : sol.coeffs)
            amax = std::max(amax, std::abs(v));
        sol.kernel_residual = std::abs(c.c_zero * an + c.c_minus * am) / (out.scale * amax);
    }
    out.status = PolyStatus::exists;
    out.solution = std::move(sol);
    return out;
}

std::vector<double> poly_existence_lambdas(int l, double mu)
{
    if (l < 1)
        throw DomainError("poly_existence_lambdas needs l >= 1");
    if (!(mu > 0.0))
        throw DomainError("poly_existence_lambdas needs mu > 0");
    // Symmetrized Jacobi matrix of the system at lambda = 0: diagonal
    // n(n-l), off-diagonal sqrt(mu(n+1) * mu(l-n-1)). Roots are lambda = -eig.
    std::vector<double> d(static_cast<std::size_t>(l)), e2(static_cast<std::size_t>(l), 0.0);
    for (int n = 0; n < l; ++n) {
        d[static_cast<std::size_t>(n)] = n * (n - l);
        if (n + 1 < l)
            e2[static_cast<std::size_t>(n)] = (mu * (n + 1)) * (mu * (l - n - 1));
    }
    // Number of eigenvalues below sigma (Sturm count via LDL^T pivots).
    auto count_below = [&](double sigma) {
        int count = 0;
        double q = 1.0;
        for (int n = 0; n < l; ++n) {
            const double off = n > 0 ? e2[static_cast<std::size_t>(n) - 1] : 0.0;
            q = (d[static_cast<std::size_t>(n)] - sigma) - (n > 0 ? off / q : 0.0);
            if (q == 0.0)
                q = -1e-300;
            if (q < 0.0)
                ++count;
        }
        return count;
    };
    const double radius = mu * (l + 1) + 1.0;
    const double lo0 = -0.25 * l * l - radius;
    const double hi0 = radius;
    std::vector<double> eig;
    for (int i = 0; i < l; ++i) {
        double lo = lo0, hi = hi0; // i-th smallest eigenvalue lies in (lo, hi]
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(mid) > i)
                hi = mid;
            else
                lo = mid;
        }
        eig.push_back(0.5 * (lo + hi));
    }
    std::vector<double> lambdas;
    for (double v : eig)
        lambdas.push_back(-v);
    std::sort(lambdas.begin(), lambdas.end());
    return lambdas;
}

RombPaths romb_laurent_paths(const PolySolution& poly, double mu, int l, const Precision& prec)
{
    if (l < 1 || static_cast<int>(poly.coeffs.size()) > l)
        throw DomainError("romb_laurent_paths needs l >= 1 and degree <= l-1");
    if (!(mu > 0.0))
        throw DomainError("romb_laurent_paths needs mu > 0");
    const double x = 2.0 * mu;
    RombPaths r;
    r.convolution.assign(static_cast<std::size_t>(l), 0.0);
    r.matrix.assign(static_cast<std::size_t>(l), 0.0);
    auto coeff = [&](int m) {
        return m < static_cast<int>(poly.coeffs.size()) ? poly.coeffs[static_cast<std::size_t>(m)] : 0.0;
    };
    // (a) exp(mu(z+1/z)) = sum_j I_j(2mu) z^j times sum_m e_m (-1)^m z^-m.
    for (int s = -l; s <= -1; ++s) {
        double c = 0.0;
        for (int m = 0; m < l; ++m)
            c += coeff(m) * ((m % 2) ? -1.0 : 1.0) * bessel_i(s + m, x, prec);
        r.convolution[static_cast<std::size_t>(s + l)] = c;
    }
    // (b) A_{k,n}^T w with w_i = (-1)^{n_i} e_{n_i}; component j is z^{-k_j}.
    std::vector<int> kp(static_cast<std::size_t>(l)), np(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) {
        kp[static_cast<std::size_t>(i)] = l - i;
        np[static_cast<std::size_t>(i)] = l - 1 - i;
    }
    const SquareMatrix A = build_matrix(Diagram(kp), Diagram(np), x, prec);
    for (int j = 0; j < l; ++j) {
        double c = 0.0;
        for (int i = 0; i < l; ++i) {
            const int ni = np[static_cast<std::size_t>(i)];
            c += ((ni % 2) ? -1.0 : 1.0) * coeff(ni) * A(i, j);
        }
        const int s = -kp[static_cast<std::size_t>(j)];
        r.matrix[static_cast<std::size_t>(s + l)] = c;
    }
    return r;
}

std::vector<double> romb_laurent_coeffs(const PolySolution& poly, double mu, int l,
                                        const Precision& prec)
{
    const RombPaths r = romb_laurent_paths(poly, mu, l, prec);
    double scale = 0.0;
    double diff = 0.0;
    for (int i = 0; i < l; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        scale = std::max(scale, std::abs(r.convolution[ui]));
        diff = std::max(diff, std::abs(r.convolution[ui] - r.matrix[ui]));
    }
    if (diff > 1e-10 * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "romb Laurent coefficient paths disagree by " << diff;
        throw ConsistencyError(os.str());
    }
    return r.convolution;
}

SignedDet delta_det(int l, double x, const Precision& prec)
{
    if (l < 1)
        throw DomainError("delta_det needs l >= 1");
    std::vector<int> kp(static_cast<std::size_t>(l)), np(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) {
        kp[static_cast<std::size_t>(i)] = l - i;
        np[static_cast<std::size_t>(i)] = l - 1 - i;
    }
    return det_f(Diagram(kp), Diagram(np), x, prec);
}

std::string solution_csv(const TaylorSolution& sol)
{
    std::ostringstream os;
    os << std::setprecision(12) << "n,a_n\n";
    for (int n = 0; n <= sol.N; ++n)
        os << n << ',' << sol.coeffs[static_cast<std::size_t>(n)] << '\n';
    return os.str();
}

} // namespace heunlock
