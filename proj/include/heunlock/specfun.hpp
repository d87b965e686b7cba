#pragma once

// Modified Bessel functions of the first kind I_j(x), x >= 0, integer j.
//
// The primary evaluation route is the power series
//     I_j(2y) = sum_s y^(j+2s) / (s! (j+s)!),   j >= 0,
// summed with a rigorous truncation-plus-rounding bound. Two independent
// routes are kept for cross-checking: trapezoid quadrature of
//     I_j(x) = (1/pi) int_0^pi exp(x cos t) cos(j t) dt
// and a normalized backward (Miller) recurrence batch.

#include "heunlock/mpreal.hpp"
#include "heunlock/precision.hpp"

#include <vector>

namespace heunlock {

/// Largest |j| accepted by the series routines.
inline constexpr int kMaxBesselOrder = 4096;

/// Largest x accepted when the result must fit in a double.
inline constexpr double kMaxBesselArgument = 700.0;

/// A value with an absolute error bound.
template <class Real>
struct Bounded {
    Real value;
    Real err;
};

/// Series evaluation of I_j(x) in arithmetic `Real` with `bits` of mantissa.
/// The returned `err` bounds truncation plus rounding; the summation stops once
/// the tail bound is below min(tol/10, 2^-bits * sum).
template <class Real>
Bounded<Real> bessel_series(int j, double x, unsigned bits, double tol);

extern template Bounded<double> bessel_series<double>(int, double, unsigned, double);
extern template Bounded<MpReal> bessel_series<MpReal>(int, double, unsigned, double);

/// I_j(x) rounded to double. Absolute error is at most
/// max(prec.tol, half an ulp of the result).
double bessel_i(int j, double x, const Precision& prec = Precision::hardware());

/// Same as bessel_i, returning the error bound alongside the value.
Bounded<double> bessel_i_bounded(int j, double x, const Precision& prec = Precision::hardware());

/// Values I_0(x) .. I_jmax(x). Lookup at negative j reflects.
struct BesselTable {
    double x = 0.0;
    int jmax = 0;
    std::vector<double> values;
    double err = 0.0; ///< uniform absolute error bound over all entries

    double at(int j) const;
};

BesselTable bessel_table(int jmax, double x, const Precision& prec = Precision::hardware());

/// Batch evaluation by normalized backward recurrence,
///     I_{j-1} = (2j/x) I_j + I_{j+1},   I_0 + 2 sum_{j>=1} I_j = e^x.
/// No error bound is attached; used as a cross-oracle against the series.
std::vector<double> bessel_table_miller(int jmax, double x);

/// R^|j| / |j|!, an upper bound for |I_j(x)| on 0 <= x <= R, valid for
/// |j| >= R^2 and R > 1.
double bessel_tail_bound(int j, double R);

/// Trapezoid rule with `nquad` panels on [0, pi]. The integrand is smooth
/// and periodic, so the rule converges geometrically.
double bessel_integral_oracle(int j, double x, int nquad);

} // namespace heunlock
