#include "heunlock/specfun.hpp"

#include "heunlock/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace heunlock {

Precision Precision::hardware(double tol)
{
    if (!(tol > 0.0))
        throw DomainError("precision tolerance must be positive");
    return Precision{Mode::hardware, 53, tol};
}

Precision Precision::extended(unsigned bits, double tol)
{
    if (bits < 64)
        throw DomainError("extended precision requires at least 64 bits");
    if (!(tol > 0.0))
        throw DomainError("precision tolerance must be positive");
    return Precision{Mode::extended, bits, tol};
}

Precision Precision::with_bits(unsigned bits, double tol)
{
    if (bits == 53)
        return hardware(tol);
    return extended(bits, tol);
}

Precision Precision::from_environment(double tol)
{
    if (const char* env = std::getenv("HEUNLOCK_PRECISION_BITS")) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || bits <= 0)
            throw DomainError("HEUNLOCK_PRECISION_BITS must be a positive integer");
        return with_bits(static_cast<unsigned>(bits), tol);
    }
    return hardware(tol);
}

std::string Precision::describe() const
{
    std::ostringstream os;
    if (is_extended())
        os << "extended(" << bits << ")";
    else
        os << "hardware-float";
    os << " tol=" << tol;
    return os.str();
}

namespace {

void check_argument(int j, double x)
{
    if (!std::isfinite(x) || x < 0.0)
        throw DomainError("Bessel argument must be finite and nonnegative");
    if (std::abs(j) > kMaxBesselOrder)
        throw DomainError("Bessel order exceeds the supported limit");
}

} // namespace

template <class Real>
Bounded<Real> bessel_series(int j, double x, unsigned bits, double tol)
{
    using std::abs;
    check_argument(j, x);
    j = std::abs(j);
    if (x == 0.0)
        return {make_real<Real>(j == 0 ? 1.0 : 0.0, bits), make_real<Real>(0.0, bits)};

    const double u = unit_roundoff(bits);
    const Real y = make_real<Real>(x / 2.0, bits);
    const Real y2 = y * y;

    // y^j / j! as a product of j factors y/k.
    Real term = make_real<Real>(1.0, bits);
    for (int k = 1; k <= j; ++k) {
        term *= y;
        term /= static_cast<double>(k);
    }

    Real sum = term;
    Real tail = make_real<Real>(0.0, bits);
    const double ymax = x / 2.0;
    int s = 0;
    for (;; ++s) {
        const double denom = static_cast<double>(s + 1) * static_cast<double>(s + j + 1);
        term *= y2;
        term /= denom;
        sum += term;
        // Ratios t_{i+1}/t_i = y^2/((i+1)(i+j+1)) decrease in i, so the tail
        // after t_{s+1} is bounded by a geometric series with the next ratio.
        const double next_ratio =
            ymax * ymax / (static_cast<double>(s + 2) * static_cast<double>(s + j + 2));
        if (next_ratio < 0.5) {
            tail = term * (next_ratio / (1.0 - next_ratio));
            const Real target_rel = sum * u;
            if (tail <= target_rel && tail <= tol / 10.0)
                break;
        }
    }
    // Term s carries at most 2j + 3s + 3 roundings, the running sum s + 1 more.
    const double nops = 2.0 * j + 4.0 * (s + 2) + 8.0;
    Real err = sum * (nops * u * 1.01) + tail;
    return {sum, err};
}

template Bounded<double> bessel_series<double>(int, double, unsigned, double);
template Bounded<MpReal> bessel_series<MpReal>(int, double, unsigned, double);

namespace {

// Orders and arguments beyond which the double-only path is replaced by a
// 128-bit evaluation rounded to double.
constexpr double kHardwareArgLimit = 20.0;
constexpr int kHardwareOrderLimit = 60;
constexpr unsigned kPromotedBits = 128;

} // namespace

Bounded<double> bessel_i_bounded(int j, double x, const Precision& prec)
{
    check_argument(j, x);
    if (x > kMaxBesselArgument)
        throw RangeError("Bessel argument beyond the representable exp range");

    const bool promote = !prec.is_extended() &&
                         (x > kHardwareArgLimit || std::abs(j) > kHardwareOrderLimit);
    if (!prec.is_extended() && !promote)
        return bessel_series<double>(j, x, 53, prec.tol);

    const unsigned bits = prec.is_extended() ? prec.bits : kPromotedBits;
    const auto r = bessel_series<MpReal>(j, x, bits, prec.tol);
    const double v = r.value.to_double();
    if (!std::isfinite(v))
        throw RangeError("Bessel value overflows double");
    const double err = r.err.to_double() + std::abs(v) * unit_roundoff(53);
    return {v, err};
}

double bessel_i(int j, double x, const Precision& prec)
{
    return bessel_i_bounded(j, x, prec).value;
}

double BesselTable::at(int j) const
{
    const int a = std::abs(j);
    if (a > jmax)
        throw DomainError("Bessel table lookup beyond jmax");
    return values[static_cast<std::size_t>(a)];
}

BesselTable bessel_table(int jmax, double x, const Precision& prec)
{
    if (jmax < 0)
        throw DomainError("bessel_table requires jmax >= 0");
    check_argument(jmax, x);
    BesselTable t;
    t.x = x;
    t.jmax = jmax;
    t.values.resize(static_cast<std::size_t>(jmax) + 1);
    // Large tables go through extended precision as a whole.
    Precision p = prec;
    if (!p.is_extended() && (jmax > kHardwareOrderLimit || x > kHardwareArgLimit))
        p = Precision::extended(kPromotedBits, prec.tol);
    for (int j = 0; j <= jmax; ++j) {
        const auto b = bessel_i_bounded(j, x, p);
        t.values[static_cast<std::size_t>(j)] = b.value;
        t.err = std::max(t.err, b.err);
    }
    return t;
}

std::vector<double> bessel_table_miller(int jmax, double x)
{
    if (jmax < 0)
        throw DomainError("bessel_table_miller requires jmax >= 0");
    check_argument(jmax, x);
    if (x > kMaxBesselArgument)
        throw RangeError("Bessel argument beyond the representable exp range");
    std::vector<double> out(static_cast<std::size_t>(jmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    // Starting order well past both jmax and the turning point j ~ x.
    const int start = 2 * (std::max(jmax, static_cast<int>(std::ceil(x))) +
                           static_cast<int>(std::ceil(std::sqrt(40.0 * std::max(jmax, 10))))) + 20;
    std::vector<double> w(static_cast<std::size_t>(start) + 2, 0.0);
    w[static_cast<std::size_t>(start)] = 1e-300;
    for (int j = start; j >= 1; --j) {
        const auto uj = static_cast<std::size_t>(j);
        w[uj - 1] = (2.0 * j / x) * w[uj] + w[uj + 1];
        if (std::abs(w[uj - 1]) > 1e200) {
            for (std::size_t k = uj - 1; k < w.size(); ++k)
                w[k] *= 1e-200;
        }
    }
    // e^x = I_0 + 2 sum I_j; factor e^-x in to avoid overflow for large x.
    double norm = w[0];
    for (int j = 1; j <= start; ++j)
        norm += 2.0 * w[static_cast<std::size_t>(j)];
    const double scale = std::exp(x) / norm;
    for (int j = 0; j <= jmax; ++j)
        out[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] * scale;
    return out;
}

double bessel_tail_bound(int j, double R)
{
    if (!(R > 1.0) || !std::isfinite(R))
        throw DomainError("bessel_tail_bound requires R > 1");
    const int a = std::abs(j);
    if (static_cast<double>(a) < R * R)
        throw DomainError("bessel_tail_bound requires |j| >= R^2");
    double b = 1.0;
    for (int k = 1; k <= a; ++k)
        b *= R / k;
    return b;
}

double bessel_integral_oracle(int j, double x, int nquad)
{
    if (nquad < 16)
        throw DomainError("bessel_integral_oracle requires nquad >= 16");
    check_argument(j, x);
    const double h = std::numbers::pi / nquad;
    const double endpoint_sign = (std::abs(j) % 2 == 0) ? 1.0 : -1.0;
    double sum = 0.5 * (std::exp(x) + std::exp(-x) * endpoint_sign);
    for (int k = 1; k < nquad; ++k) {
        const double t = k * h;
        sum += std::exp(x * std::cos(t)) * std::cos(j * t);
    }
    return sum * h / std::numbers::pi;
}

} // namespace heunlock
