#pragma once

#include <mpfr.h>

#include <string>

namespace heunlock {

/// Owning wrapper around an `mpfr_t` with an explicit per-value precision.
///
/// Binary operations round to nearest at the larger precision of the two
/// operands; mixed operations with `double` keep the precision of the
/// multiprecision operand. No global precision state is consulted, so values
/// can be used concurrently from independent threads.
class MpReal {
public:
    explicit MpReal(unsigned bits = 64);
    MpReal(double v, unsigned bits);
    MpReal(const MpReal& other);
    MpReal(MpReal&& other) noexcept;
    MpReal& operator=(const MpReal& other);
    MpReal& operator=(MpReal&& other) noexcept;
    MpReal& operator=(double v);
    ~MpReal();

    unsigned bits() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    std::string to_string(int digits = 20) const;

    MpReal& operator+=(const MpReal& o);
    MpReal& operator-=(const MpReal& o);
    MpReal& operator*=(const MpReal& o);
    MpReal& operator/=(const MpReal& o);
    MpReal& operator+=(double o);
    MpReal& operator-=(double o);
    MpReal& operator*=(double o);
    MpReal& operator/=(double o);

    friend MpReal operator+(const MpReal& a, const MpReal& b);
    friend MpReal operator-(const MpReal& a, const MpReal& b);
    friend MpReal operator*(const MpReal& a, const MpReal& b);
    friend MpReal operator/(const MpReal& a, const MpReal& b);
    friend MpReal operator+(const MpReal& a, double b) { MpReal r(a); r += b; return r; }
    friend MpReal operator-(const MpReal& a, double b) { MpReal r(a); r -= b; return r; }
    friend MpReal operator*(const MpReal& a, double b) { MpReal r(a); r *= b; return r; }
    friend MpReal operator/(const MpReal& a, double b) { MpReal r(a); r /= b; return r; }
    friend MpReal operator*(double a, const MpReal& b) { return b * a; }
    friend MpReal operator+(double a, const MpReal& b) { return b + a; }
    friend MpReal operator-(const MpReal& a);

    friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const MpReal& a, const MpReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const MpReal& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const MpReal& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const MpReal& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const MpReal& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

    friend MpReal abs(const MpReal& a);
    friend MpReal exp(const MpReal& a);

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
};

/// Uniform construction for code templated over `double` and `MpReal`.
template <class Real>
Real make_real(double v, unsigned bits);

template <>
inline double make_real<double>(double v, unsigned) { return v; }

template <>
inline MpReal make_real<MpReal>(double v, unsigned bits) { return MpReal(v, bits); }

inline double to_double(double v) { return v; }
inline double to_double(const MpReal& v) { return v.to_double(); }

/// Unit roundoff 2^-bits of round-to-nearest arithmetic with `bits` of mantissa.
double unit_roundoff(unsigned bits);

} // namespace heunlock
