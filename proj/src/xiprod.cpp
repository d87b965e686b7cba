#include "heunlock/xiprod.hpp"

#include "heunlock/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace heunlock {

double Mat2::max_norm() const
{
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

Mat2 Mat2::operator*(const Mat2& o) const
{
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
Mat2 Mat2::operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
Mat2 Mat2::operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

bool Mat2::finite() const
{
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

Mat2 m_j(int j, int l, double lambda, double mu)
{
    if (l < 0)
        throw DomainError("m_j needs l >= 0");
    if (j <= l)
        throw DomainError("m_j needs j >= l + 1");
    const double q = static_cast<double>(j) * static_cast<double>(j - l);
    return {1.0 + lambda / q, mu * mu / q, 1.0, 0.0};
}

Mat2 m_j(int j, const HeunParams& p) { return m_j(j, p.l, p.lambda, p.mu); }

namespace {

// Quad precision throughout: rounding deep in the product is amplified by
// the leading factors j < ~mu (up to ~1e10 at mu ~ 15), and the per-factor
// perturbations are O(1/j^2), so doubles would also drift like J u.
using quad = __float128;

struct Mat2L {
    quad a, b, c, d;
};

quad qabs(quad x) { return x < 0 ? -x : x; }

Mat2L partial_product_q(int m, long J, int l, double lambda, double mu)
{
    const quad lam = lambda, mu2 = static_cast<quad>(mu) * mu;
    const quad qJ = static_cast<quad>(J) * static_cast<quad>(J - l);
    Mat2L X{1 + lam / qJ, mu2 / qJ, 1, 0};
    // X <- M_j X; the second row of M_j copies the first row of X.
    for (long j = J - 1; j >= m; --j) {
        const quad q = static_cast<quad>(j) * static_cast<quad>(j - l);
        const quad s = 1 + lam / q, t = mu2 / q;
        X = {s * X.a + t * X.c, s * X.b + t * X.d, X.a, X.b};
    }
    return X;
}

} // namespace

Mat2 partial_product(int m, long J, int l, double lambda, double mu)
{
    if (m <= l)
        throw DomainError("partial_product needs m >= l + 1");
    if (J < m)
        throw DomainError("partial_product needs J >= m");
    (void)m_j(static_cast<int>(std::min<long>(J, std::numeric_limits<int>::max())), l, lambda, mu);
    const auto X = partial_product_q(m, J, l, lambda, mu);
    return {static_cast<double>(X.a), static_cast<double>(X.b), static_cast<double>(X.c),
            static_cast<double>(X.d)};
}

namespace {

constexpr int kMaxExtrapolationOrder = 8;

} // namespace

TruncatedProduct r_m(int m, int l, double lambda, double mu, double tol, long max_factors)
{
    if (m <= l)
        throw DomainError("r_m needs m >= l + 1");
    if (!(tol > 0.0))
        throw DomainError("r_m needs tol > 0");
    if (!std::isfinite(lambda) || !std::isfinite(mu))
        throw DomainError("r_m needs finite parameters");
    TruncatedProduct out;
    out.m = m;
    if (lambda == 0.0 && mu == 0.0) {
        out.value = Mat2{1.0, 0.0, 1.0, 0.0};
        out.J = m;
        return out;
    }
    const double growth = std::abs(lambda) + mu * mu;
    long n0 = std::max<long>(64, static_cast<long>(8.0 * std::ceil(std::sqrt(growth))) + 2L * l);

    auto norm = [](const Mat2L& x) {
        return static_cast<double>(std::max({qabs(x.a), qabs(x.b), qabs(x.c), qabs(x.d)}));
    };
    auto diff = [](const Mat2L& x, const Mat2L& y) {
        return Mat2L{x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    };
    auto combine = [](const Mat2L& x, quad wx, const Mat2L& y, quad wy, quad inv) {
        return Mat2L{(x.a * wx - y.a * wy) * inv, (x.b * wx - y.b * wy) * inv,
                     (x.c * wx - y.c * wy) * inv, (x.d * wx - y.d * wy) * inv};
    };

    std::vector<quad> h;
    std::vector<std::vector<Mat2L>> T; // Neville tableau rows
    double prev_inc = std::numeric_limits<double>::infinity();
    Mat2L best{};
    for (int k = 0;; ++k) {
        const long factors = n0 << k;
        if (factors > max_factors) {
            std::ostringstream os;
            os << "R_" << m << " did not converge within " << max_factors
               << " factors (last increment " << prev_inc << ")";
            throw ConvergenceError(os.str());
        }
        const long J = m - 1 + factors;
        const Mat2L P = partial_product_q(m, J, l, lambda, mu);
        if (!std::isfinite(norm(P)))
            throw RangeError("partial product of M_j overflowed");
        h.push_back(1 / static_cast<quad>(J));
        std::vector<Mat2L> row{P};
        const int order = std::min(k, kMaxExtrapolationOrder);
        const auto uk = static_cast<std::size_t>(k);
        for (int i = 1; i <= order; ++i) {
            const quad hk = h[uk];
            const quad hki = h[uk - static_cast<std::size_t>(i)];
            const Mat2L& lo = T[uk - 1][static_cast<std::size_t>(i - 1)];
            row.push_back(combine(row[static_cast<std::size_t>(i - 1)], hki, lo, hk, 1 / (hki - hk)));
        }
        const Mat2L cur = row.back();
        T.push_back(std::move(row));
        out.J = J;
        out.raw_envelope = growth / static_cast<double>(J - l) * std::max(1.0, norm(P));
        if (k >= 3) {
            const double inc = norm(diff(cur, best));
            const double scale = std::max(1.0, norm(cur));
            // Converged, or increments have hit the rounding floor and stopped
            // shrinking; in the second case the estimate keeps the larger one.
            const bool converged = inc < tol * scale;
            const bool floor = k >= 6 && inc > 0.25 * prev_inc && inc < 1e2 * tol * scale;
            if (converged || floor) {
                out.value = {static_cast<double>(cur.a), static_cast<double>(cur.b),
                             static_cast<double>(cur.c), static_cast<double>(cur.d)};
                out.tail_est = 2.0 * (floor ? std::max(inc, prev_inc) : inc) +
                               64.0 * std::numeric_limits<double>::epsilon() * scale;
                return out;
            }
            prev_inc = inc;
        }
        best = cur;
    }
}

TruncatedProduct r_m(int m, const HeunParams& p, double tol) { return r_m(m, p.l, p.lambda, p.mu, tol); }

int XiValue::certified_sign() const
{
    if (value - err > 0.0)
        return 1;
    if (value + err < 0.0)
        return -1;
    return 0;
}

XiValue xi_l(int l, double lambda, double mu, double tol)
{
    if (l < 0)
        throw DomainError("xi_l needs l >= 0");
    if (mu < 0.0)
        throw DomainError("xi_l needs mu >= 0");
    const auto R = r_m(l + 1, l, lambda, mu, tol);
    const double mu2 = mu * mu;
    XiValue x;
    x.value = lambda * R.value.a + mu2 * R.value.c;
    x.scale = std::abs(lambda) * std::abs(R.value.a) + mu2 * std::abs(R.value.c);
    x.err = (std::abs(lambda) + mu2) * R.tail_est +
            8.0 * std::numeric_limits<double>::epsilon() * x.scale;
    x.J = R.J;
    return x;
}

XiValue xi_l(const HeunParams& p, double tol) { return xi_l(p.l, p.lambda, p.mu, tol); }

HeunParams josephson_heun_params(int l, double omega, double A)
{
    if (!(omega > 0.0))
        throw DomainError("omega must be positive");
    const double mu = A / (2.0 * omega);
    const double lambda = 1.0 / (4.0 * omega * omega) - mu * mu;
    return HeunParams(l, lambda, mu);
}

std::vector<XiGridSample> xi_grid(int l, double omega, double A_max, double grid_step,
                                  bool parallel)
{
    if (!(A_max > 0.0) || !(grid_step > 0.0))
        throw DomainError("xi_grid needs A_max > 0 and grid_step > 0");
    const long n = static_cast<long>(std::ceil(A_max / grid_step - 1e-9));
    const double h = A_max / static_cast<double>(n);
    std::vector<XiGridSample> out(static_cast<std::size_t>(n));
    auto eval = [&](long i) {
        const double A = h * static_cast<double>(i + 1);
        const auto p = josephson_heun_params(l, omega, A);
        out[static_cast<std::size_t>(i)] = {A, xi_l(p)};
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long i = 0; i < n; ++i)
            eval(i);
    } else {
        for (long i = 0; i < n; ++i)
            eval(i);
    }
    return out;
}

namespace {

XiValue xi_at(int l, double omega, double A, double tol)
{
    return xi_l(josephson_heun_params(l, omega, A), tol);
}

// Bisection on [a, b] with certified opposite signs sa, sb at the ends.
// Stops when the width is below tol or the midpoint sign is uncertified.
double bisect(int l, double omega, double a, double b, int sa, double tol, double xi_tol)
{
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const int s = xi_at(l, omega, mid, xi_tol).certified_sign();
        if (s == 0)
            return mid;
        if (s == sa)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

// Widen [A - w, A + w] until both ends carry certified opposite signs.
bool certify_bracket(int l, double omega, double A, double w, double xi_tol, XiRoot& r)
{
    for (int it = 0; it < 4; ++it, w *= 0.5) {
        const double lo = std::max(A - w, 0.5 * A);
        const double hi = A + w;
        const int s1 = xi_at(l, omega, lo, xi_tol).certified_sign();
        const int s2 = xi_at(l, omega, hi, xi_tol).certified_sign();
        if (s1 != 0 && s2 != 0 && s1 != s2) {
            r.bracket_lo = lo;
            r.bracket_hi = hi;
            return true;
        }
    }
    return false;
}

XiRoot make_root(int l, double omega, double A, double xi_tol)
{
    XiRoot r;
    const auto p = josephson_heun_params(l, omega, A);
    r.A = A;
    r.lambda = p.lambda;
    r.mu = p.mu;
    r.xi_residual = std::abs(xi_l(p, xi_tol).value);
    return r;
}

} // namespace

std::vector<XiRoot> xi_roots_on_line(int l, double omega, double A_max, double tol,
                                     const RootScanOptions& opt)
{
    if (!(tol > 0.0))
        throw DomainError("xi_roots_on_line needs tol > 0");
    const auto grid = xi_grid(l, omega, A_max, opt.grid_step, opt.parallel);
    std::vector<XiRoot> roots;

    // Certified-sign samples in ascending A; an uncertified sample is skipped
    // and the neighbouring certified samples bracket it.
    struct Sample {
        double A;
        int sign;
        double rel;
    };
    std::vector<Sample> s;
    for (const auto& g : grid)
        s.push_back({g.A, g.xi.certified_sign(),
                     g.xi.scale > 0 ? std::abs(g.xi.value) / g.xi.scale : 0.0});

    auto add_sign_change = [&](double a, int sa, double b) {
        const double A = bisect(l, omega, a, b, sa, tol, opt.xi_tol);
        XiRoot r = make_root(l, omega, A, opt.xi_tol);
        if (!certify_bracket(l, omega, A, opt.bracket_halfwidth, opt.xi_tol, r)) {
            r.bracket_lo = a;
            r.bracket_hi = b;
            r.suspected = true;
        }
        roots.push_back(r);
    };

    int last = -1;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].sign == 0)
            continue;
        if (last >= 0 && s[static_cast<std::size_t>(last)].sign != s[i].sign)
            add_sign_change(s[static_cast<std::size_t>(last)].A, s[static_cast<std::size_t>(last)].sign,
                            s[i].A);
        else if (last >= 0 && static_cast<int>(i) == last + 1 && i + 1 < s.size() && i > 0) {
            // Local minimum of |xi|/scale with no sign change: look inside the
            // two adjacent cells for a close root pair.
            const bool local_min = s[i].rel < s[i - 1].rel && s[i].rel < s[i + 1].rel &&
                                   s[i + 1].sign == s[i].sign;
            if (local_min && s[i].rel < 1e-2) {
                const double a0 = s[i - 1].A, b0 = s[i + 1].A;
                const int sub = 64;
                double pa = a0;
                int ps = s[i - 1].sign;
                bool found = false;
                double best_rel = s[i].rel, best_A = s[i].A;
                for (int q = 1; q <= sub; ++q) {
                    const double A = a0 + (b0 - a0) * q / sub;
                    const auto x = xi_at(l, omega, A, opt.xi_tol);
                    const int sg = x.certified_sign();
                    if (x.scale > 0 && std::abs(x.value) / x.scale < best_rel) {
                        best_rel = std::abs(x.value) / x.scale;
                        best_A = A;
                    }
                    if (sg == 0)
                        continue;
                    if (sg != ps) {
                        add_sign_change(pa, ps, A);
                        found = true;
                    }
                    pa = A;
                    ps = sg;
                }
                if (!found && best_rel < 1e-10) {
                    XiRoot r = make_root(l, omega, best_A, opt.xi_tol);
                    r.suspected = true;
                    r.bracket_lo = a0;
                    r.bracket_hi = b0;
                    roots.push_back(r);
                }
            }
        }
        last = static_cast<int>(i);
    }
    std::sort(roots.begin(), roots.end(), [](const XiRoot& x, const XiRoot& y) { return x.A < y.A; });
    return roots;
}

std::string roots_csv(int l, double omega, const std::vector<XiRoot>& roots,
                      const std::vector<double>& defects)
{
    std::ostringstream os;
    os << std::setprecision(12) << "l,omega,A,B,lambda,mu,xi_residual,defect_crosscheck\n";
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto& r = roots[i];
        os << l << ',' << omega << ',' << r.A << ',' << l * omega << ',' << r.lambda << ','
           << r.mu << ',' << r.xi_residual << ',';
        if (i < defects.size())
            os << defects[i];
        os << '\n';
    }
    return os.str();
}

} // namespace heunlock
