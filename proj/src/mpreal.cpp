#include "heunlock/mpreal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace heunlock {

namespace {

mpfr_prec_t larger(const MpReal& a, const MpReal& b)
{
    return std::max(mpfr_get_prec(a.raw()), mpfr_get_prec(b.raw()));
}

} // namespace

MpReal::MpReal(unsigned bits)
{
    mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
    mpfr_set_zero(v_, 1);
}

MpReal::MpReal(double v, unsigned bits)
{
    mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
    mpfr_set_d(v_, v, MPFR_RNDN);
}

MpReal::MpReal(const MpReal& other)
{
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

MpReal::MpReal(MpReal&& other) noexcept
{
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
}

MpReal& MpReal::operator=(const MpReal& other)
{
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

MpReal& MpReal::operator=(MpReal&& other) noexcept
{
    if (this != &other)
        mpfr_swap(v_, other.v_);
    return *this;
}

MpReal& MpReal::operator=(double v)
{
    mpfr_set_d(v_, v, MPFR_RNDN);
    return *this;
}

MpReal::~MpReal() { mpfr_clear(v_); }

std::string MpReal::to_string(int digits) const
{
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

// Compound operators widen the destination when the operand is more precise.
#define HEUNLOCK_MP_COMPOUND(op, fn)                                      \
    MpReal& MpReal::operator op(const MpReal& o)                          \
    {                                                                     \
        if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_))                      \
            mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);          \
        fn(v_, v_, o.v_, MPFR_RNDN);                                      \
        return *this;                                                     \
    }

HEUNLOCK_MP_COMPOUND(+=, mpfr_add)
HEUNLOCK_MP_COMPOUND(-=, mpfr_sub)
HEUNLOCK_MP_COMPOUND(*=, mpfr_mul)
HEUNLOCK_MP_COMPOUND(/=, mpfr_div)
#undef HEUNLOCK_MP_COMPOUND

MpReal& MpReal::operator+=(double o) { mpfr_add_d(v_, v_, o, MPFR_RNDN); return *this; }
MpReal& MpReal::operator-=(double o) { mpfr_sub_d(v_, v_, o, MPFR_RNDN); return *this; }
MpReal& MpReal::operator*=(double o) { mpfr_mul_d(v_, v_, o, MPFR_RNDN); return *this; }
MpReal& MpReal::operator/=(double o) { mpfr_div_d(v_, v_, o, MPFR_RNDN); return *this; }

#define HEUNLOCK_MP_BINARY(op, fn)                                        \
    MpReal operator op(const MpReal& a, const MpReal& b)                  \
    {                                                                     \
        MpReal r(static_cast<unsigned>(larger(a, b)));                    \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                  \
        return r;                                                         \
    }

HEUNLOCK_MP_BINARY(+, mpfr_add)
HEUNLOCK_MP_BINARY(-, mpfr_sub)
HEUNLOCK_MP_BINARY(*, mpfr_mul)
HEUNLOCK_MP_BINARY(/, mpfr_div)
#undef HEUNLOCK_MP_BINARY

MpReal operator-(const MpReal& a)
{
    MpReal r(a.bits());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

MpReal abs(const MpReal& a)
{
    MpReal r(a.bits());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
}

MpReal exp(const MpReal& a)
{
    MpReal r(a.bits());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
}

double unit_roundoff(unsigned bits) { return std::ldexp(1.0, -static_cast<int>(bits)); }

} // namespace heunlock
