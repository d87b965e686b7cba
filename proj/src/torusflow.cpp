#include "heunlock/torusflow.hpp"

#include "heunlock/errors.hpp"
#include "heunlock/xiprod.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace heunlock {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Scalar1 = std::array<double, 1>;
using LinState = std::array<double, 8>; // two complex columns (u, v), re/im interleaved

template <class State, class System>
void integrate_to(System&& sys, State& x, double t0, double t1, double& dt, double tol)
{
    using Stepper = odeint::runge_kutta_dopri5<State>;
    auto stepper = odeint::make_controlled<Stepper>(tol, tol);
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    if (dt == 0.0 || std::signbit(dt) != std::signbit(dir))
        dt = dir * 0.01;
    long guard = 0;
    while (dir * (t1 - t) > 0.0) {
        double h = dt;
        const bool last = dir * (t + h - t1) >= 0.0;
        if (last)
            h = t1 - t;
        double hh = h;
        const auto res = stepper.try_step(sys, x, t, hh);
        if (res == odeint::success) {
            if (last)
                t = t1;
            // hh is the proposed next step; keep it unless we clipped
            if (!last || std::abs(hh) > std::abs(dt))
                dt = hh;
        } else {
            dt = hh;
            if (std::abs(dt) < 1e-14)
                throw ConvergenceError("step size underflow in torus flow integration");
        }
        if (++guard > 50000000)
            throw ConvergenceError("too many integration steps");
    }
}

struct PhaseField {
    double l, two_mu, inv_omega;
    void operator()(const Scalar1& x, Scalar1& dx, double tau) const
    {
        dx[0] = -std::sin(x[0]) * inv_omega + l + two_mu * std::cos(tau);
    }
};

struct LinearField {
    double l, two_mu, half_inv_omega;
    void operator()(const LinState& x, LinState& dx, double tau) const
    {
        const double c = l + two_mu * std::cos(tau);
        for (int col = 0; col < 2; ++col) {
            const int o = 4 * col;
            const double ur = x[o], ui = x[o + 1], vr = x[o + 2], vi = x[o + 3];
            // u' = -i c u + v/(2 omega), v' = u/(2 omega)
            dx[o] = c * ui + half_inv_omega * vr;
            dx[o + 1] = -c * ur + half_inv_omega * vi;
            dx[o + 2] = half_inv_omega * ur;
            dx[o + 3] = half_inv_omega * ui;
        }
    }
};

PhaseField phase_field(const JosephsonParams& p)
{
    return {p.l(), 2.0 * p.mu(), 1.0 / p.omega};
}

Monodromy2 integrate_linear(const JosephsonParams& p, double t0, double t1, double tol)
{
    if (!(tol > 0.0))
        throw DomainError("monodromy needs tol > 0");
    LinearField f{p.l(), 2.0 * p.mu(), 0.5 / p.omega};
    LinState x{1, 0, 0, 0, 0, 0, 1, 0}; // columns (1, 0) and (0, 1)
    double dt = 0.0;
    integrate_to(f, x, t0, t1, dt, tol);
    Monodromy2 M;
    M.tol = tol;
    // column c has (u, v) = (x[4c] + i x[4c+1], x[4c+2] + i x[4c+3])
    M.m[0] = {x[0], x[1]};
    M.m[2] = {x[2], x[3]};
    M.m[1] = {x[4], x[5]};
    M.m[3] = {x[6], x[7]};
    return M;
}

void check_periods(int periods, int minimum)
{
    if (periods < minimum) {
        std::ostringstream os;
        os << "rotation number needs at least " << minimum << " periods";
        throw DomainError(os.str());
    }
}

} // namespace

JosephsonParams::JosephsonParams(double omega_, double B_, double A_) : omega(omega_), B(B_), A(A_)
{
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("omega must be positive");
    if (!std::isfinite(B) || !std::isfinite(A))
        throw DomainError("B and A must be finite");
}

HeunParams JosephsonParams::heun() const
{
    const double lv = l();
    const double li = std::round(lv);
    if (std::abs(lv - li) > 1e-9 || li < 0)
        throw DomainError("Heun parameters need B = l omega with integer l >= 0");
    return HeunParams(static_cast<int>(li), lambda(), mu());
}

double flow_step(const JosephsonParams& p, double phi0, double tau0, double tau1, double tol)
{
    if (!(tau1 > tau0))
        throw DomainError("flow_step needs tau1 > tau0");
    if (!(tol > 0.0))
        throw DomainError("flow_step needs tol > 0");
    // The field is 2 pi periodic in phi; integrating the reduced phase keeps
    // the relative tolerance meaningful for long lifts.
    const double offset = kTwoPi * std::floor(phi0 / kTwoPi);
    Scalar1 x{phi0 - offset};
    double dt = 0.0;
    integrate_to(phase_field(p), x, tau0, tau1, dt, tol);
    return x[0] + offset;
}

double birkhoff_weight(double t)
{
    if (t <= 0.0 || t >= 1.0)
        return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}

RotationResult rotation_from_lifts(const std::vector<double>& lifts, double tol)
{
    if (lifts.size() < 2)
        throw DomainError("rotation_from_lifts needs at least two lifts");
    const int P = static_cast<int>(lifts.size()) - 1;
    double sw = 0.0, swd = 0.0, wmax = 0.0;
    for (int k = 0; k < P; ++k) {
        const double w = birkhoff_weight((k + 0.5) / P);
        sw += w;
        swd += w * (lifts[static_cast<std::size_t>(k) + 1] - lifts[static_cast<std::size_t>(k)]);
        wmax = std::max(wmax, w);
    }
    RotationResult r;
    r.periods = P;
    r.rho = swd / (sw * kTwoPi);
    r.conf = 2.0 * wmax / sw + 10.0 * tol;
    return r;
}

RotationResult rotation_number(const JosephsonParams& p, int periods, double tol)
{
    check_periods(periods, 50);
    if (!(tol > 0.0))
        throw DomainError("rotation_number needs tol > 0");
    const auto f = phase_field(p);
    std::vector<double> lifts(static_cast<std::size_t>(periods) + 1);
    Scalar1 x{0.0};
    lifts[0] = 0.0;
    double dt = 0.0;
    for (int k = 0; k < periods; ++k) {
        // Both tau and phi are reduced each period.
        const double start = x[0] - kTwoPi * std::floor(x[0] / kTwoPi);
        x[0] = start;
        integrate_to(f, x, 0.0, kTwoPi, dt, tol);
        const auto uk = static_cast<std::size_t>(k);
        lifts[uk + 1] = lifts[uk] + (x[0] - start);
    }
    return rotation_from_lifts(lifts, tol);
}

std::complex<double> Monodromy2::det() const { return m[0] * m[3] - m[1] * m[2]; }
std::complex<double> Monodromy2::trace() const { return m[0] + m[3]; }

std::complex<double> Monodromy2::liouville_det(double l) const
{
    return std::polar(1.0, -kTwoPi * l);
}

double Monodromy2::distance_to_identity() const
{
    return std::max({std::abs(m[0] - 1.0), std::abs(m[1]), std::abs(m[2]), std::abs(m[3] - 1.0)});
}

Monodromy2 Monodromy2::operator*(const Monodromy2& o) const
{
    Monodromy2 r;
    r.tol = std::max(tol, o.tol);
    r.m[0] = m[0] * o.m[0] + m[1] * o.m[2];
    r.m[1] = m[0] * o.m[1] + m[1] * o.m[3];
    r.m[2] = m[2] * o.m[0] + m[3] * o.m[2];
    r.m[3] = m[2] * o.m[1] + m[3] * o.m[3];
    return r;
}

Monodromy2 monodromy(const JosephsonParams& p, double tol)
{
    return integrate_linear(p, 0.0, kTwoPi, tol);
}

Monodromy2 monodromy_reverse(const JosephsonParams& p, double tol)
{
    return integrate_linear(p, kTwoPi, 0.0, tol);
}

PeriodMap::PeriodMap(const JosephsonParams& p, double tol) : mono_(monodromy(p, tol))
{
    const auto& m = mono_.m;
    if (!(std::abs(m[0]) > std::abs(m[1])) || !(std::abs(m[3]) > std::abs(m[2])))
        throw ConsistencyError("monodromy is not in U(1,1) within integration accuracy");
    r1_ = m[1] / m[0];
    r2_ = m[2] / m[3];
    const double base = std::arg(m[3]) - std::arg(m[0]);
    const double shape = std::arg(1.0 + r2_) - std::arg(1.0 + r1_);
    const double direct = flow_step(p, 0.0, 0.0, kTwoPi, 1e-10);
    const double turns = (direct - shape - base) / kTwoPi;
    k_ = std::lround(turns);
    if (std::abs(turns - static_cast<double>(k_)) > 1e-4) {
        std::ostringstream os;
        os << "period map and direct integration disagree by " << (turns - k_) * kTwoPi;
        throw ConsistencyError(os.str());
    }
    c_ = base + kTwoPi * static_cast<double>(k_);
}

double PeriodMap::operator()(double phi) const
{
    const std::complex<double> e = std::polar(1.0, phi);
    return phi + std::arg(1.0 + r2_ * std::conj(e)) - std::arg(1.0 + r1_ * e) + c_;
}

RotationResult rotation_number_fast(const JosephsonParams& p, int periods, double tol)
{
    check_periods(periods, 50);
    const PeriodMap F(p, tol);
    std::vector<double> lifts(static_cast<std::size_t>(periods) + 1);
    lifts[0] = 0.0;
    for (int k = 0; k < periods; ++k)
        lifts[static_cast<std::size_t>(k) + 1] = F(lifts[static_cast<std::size_t>(k)]);
    return rotation_from_lifts(lifts, tol);
}

namespace {

double rho_at(double B, double A, double omega, const LockSearchOptions& opt)
{
    const JosephsonParams p(omega, B, A);
    return opt.fast ? rotation_number_fast(p, opt.periods, std::min(opt.integ_tol, 1e-12)).rho
                    : rotation_number(p, opt.periods, opt.integ_tol).rho;
}

// Smallest B in [lo, hi] with rho(B) >= target (rho nondecreasing), to tol.
double crossing(double target, double lo, double hi, double A, double omega, double tol,
                const LockSearchOptions& opt)
{
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (rho_at(mid, A, omega, opt) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

bool monotone_on(double lo, double hi, double A, double omega, const LockSearchOptions& opt,
                 std::string& why)
{
    const int n = std::max(2, opt.monotonicity_samples);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const double B = lo + (hi - lo) * i / n;
        const double r = rho_at(B, A, omega, opt);
        if (r < prev - 1e-6) {
            std::ostringstream os;
            os << "rho decreases between samples near B = " << B;
            why = os.str();
            return false;
        }
        prev = r;
    }
    return true;
}

} // namespace

LockInterval phase_lock_interval(int lvl, double A, double omega, double tol,
                                 const LockSearchOptions& opt)
{
    if (!(omega > 0.0) || !(tol > 0.0))
        throw DomainError("phase_lock_interval needs omega > 0 and tol > 0");
    if (std::abs(lvl) > 1000)
        throw DomainError("phase_lock_interval level out of range");
    // |rho - B/omega| <= 2 mu + 1/omega, so rho = lvl needs |B - lvl omega| <= |A| + 1.
    const double lo = lvl * omega - std::abs(A) - 1.0 - 1e-3;
    const double hi = lvl * omega + std::abs(A) + 1.0 + 1e-3;
    LockInterval out;
    out.reliable = monotone_on(lo, hi, A, omega, opt, out.diagnostic);
    const double b_lo = crossing(lvl - opt.rho_tol, lo, hi, A, omega, 0.25 * tol, opt);
    const double b_hi = crossing(lvl + opt.rho_tol, lo, hi, A, omega, 0.25 * tol, opt);
    out.lo = b_lo;
    out.hi = b_hi;
    out.empty = !(b_hi - b_lo >= tol);
    return out;
}

LevelWidth level_set_width(double target, double A, double omega, double delta, double tol,
                           const LockSearchOptions& opt)
{
    if (!(delta > 0.0) || !(tol > 0.0))
        throw DomainError("level_set_width needs delta > 0 and tol > 0");
    double lo = target * omega - std::abs(A) - 1.0 - 1e-3;
    double hi = target * omega + std::abs(A) + 1.0 + 1e-3;
    LevelWidth w;
    std::string why;
    w.reliable = monotone_on(lo, hi, A, omega, opt, why);
    w.lo = crossing(target - delta, lo, hi, A, omega, tol, opt);
    w.hi = crossing(target + delta, lo, hi, A, omega, tol, opt);
    w.width = w.hi - w.lo;
    return w;
}

std::string AdjacencyReport::to_json() const
{
    std::ostringstream os;
    os << std::setprecision(12) << "{\"l\": " << l << ", \"omega\": " << omega << ", \"A\": " << A
       << ", \"B\": " << B << ", \"xi_residual\": " << xi_residual
       << ", \"entire_solution_defect\": " << entire_solution_defect << ", \"rho\": " << rho
       << ", \"rho_conf\": " << rho_conf << ", \"rho_equals_l\": " << (rho_equals_l ? "true" : "false")
       << ", \"parity_constraint\": " << (parity_constraint ? "true" : "false")
       << ", \"magnitude_constraint\": " << (magnitude_constraint ? "true" : "false")
       << ", \"monodromy_distance\": " << monodromy_distance << "}";
    return os.str();
}

AdjacencyReport adjacency_verify(int lvl, double omega, double A, const AdjacencyOptions& opt)
{
    if (lvl < 0)
        throw DomainError("adjacency_verify needs lvl >= 0");
    if (!(A > 0.0))
        throw DomainError("adjacency_verify needs A > 0");
    AdjacencyReport r;
    r.l = lvl;
    r.omega = omega;
    r.A = A;
    r.B = lvl * omega;
    const JosephsonParams jp(omega, r.B, A);
    const HeunParams hp(lvl, jp.lambda(), jp.mu());
    r.xi_residual = std::abs(xi_l(hp).value);
    r.entire_solution_defect = entire_solution_defect(hp, default_backward_depth(hp));
    const auto rot = rotation_number(jp, opt.periods, 1e-10);
    r.rho = rot.rho;
    r.rho_conf = rot.conf;
    r.rho_equals_l = std::abs(r.rho - lvl) < opt.rho_tol;
    const double half = 0.5 * (r.rho - lvl);
    r.parity_constraint = std::abs(half - std::round(half)) * 2.0 < opt.rho_tol;
    r.magnitude_constraint = std::abs(static_cast<double>(lvl)) <= std::abs(r.rho) + opt.rho_tol;
    r.monodromy_distance = monodromy(jp, opt.integ_tol).distance_to_identity();
    return r;
}

} // namespace heunlock
