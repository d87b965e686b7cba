#pragma once

#include <string>

namespace heunlock {

/// Arithmetic selection for the special-function and determinant code.
///
/// `hardware` evaluates in IEEE double (53 bits). `extended` evaluates in
/// MPFR with `bits` of mantissa. `tol` is the absolute error target of a
/// single Bessel value.
struct Precision {
    enum class Mode { hardware, extended };

    Mode mode = Mode::hardware;
    unsigned bits = 53;
    double tol = 1e-15;

    static Precision hardware(double tol = 1e-15);
    static Precision extended(unsigned bits, double tol = 1e-15);

    /// Reads HEUNLOCK_PRECISION_BITS when set (53 selects hardware).
    static Precision from_environment(double tol = 1e-15);

    /// Same mode selection as `extended`, but 53 maps to hardware.
    static Precision with_bits(unsigned bits, double tol = 1e-15);

    bool is_extended() const { return mode == Mode::extended; }
    unsigned working_bits() const { return is_extended() ? bits : 53u; }
    std::string describe() const;
};

} // namespace heunlock
