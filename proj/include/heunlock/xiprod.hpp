#pragma once

// The matrices
//
//   M_j = [[1 + lambda/(j(j-l)), mu^2/(j(j-l))], [1, 0]],   j >= l+1,
//
// their right-infinite product R_m = M_m M_{m+1} ..., and
//
//   xi_l(lambda, mu) = (lambda, mu^2) R_{l+1} (1, 0)^T.
//
// With b_n = a_n n!/mu^n the Taylor recurrence of the first Heun equation reads
// (b_{n-1}, b_n)^T = M_{n+l} (b_n, b_{n+1})^T, so R_{l+1}(1,0)^T is (b_0, b_1) of
// the minimal solution with b_n -> 1, and xi_l is mu a_1 + lambda a_0 for it.

#include "heunlock/heunrec.hpp"

#include <array>
#include <string>
#include <vector>

namespace heunlock {

struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0; // [[a, b], [c, d]]

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    double max_norm() const;
    Mat2 operator*(const Mat2& o) const;
    Mat2 operator-(const Mat2& o) const;
    Mat2 operator+(const Mat2& o) const;
    Mat2 operator*(double s) const;
    bool finite() const;
};

/// Raw-parameter form; mu = 0 is allowed here (limit cases).
Mat2 m_j(int j, int l, double lambda, double mu);
Mat2 m_j(int j, const HeunParams& p);

/// M_m M_{m+1} ... M_J evaluated right to left.
Mat2 partial_product(int m, long J, int l, double lambda, double mu);

struct TruncatedProduct {
    Mat2 value;
    int m = 0;
    long J = 0;            ///< last factor used by the deepest partial product
    double tail_est = 0.0; ///< heuristic bound, see r_m
    /// (|lambda| + mu^2)/(J - l) * |P_J|: size of what the raw partial product
    /// P_J still misses. Reported for reference; the value is extrapolated.
    double raw_envelope = 0.0;
};

/// Default cap on the number of factors.
inline constexpr long kMaxProductFactors = 1000000;

/// R_m from partial products P_J with J - m + 1 = N0 2^k factors, k = 0, 1, ...
/// P_J - R_m has an expansion in powers of 1/J, so the sequence is
/// Richardson-extrapolated; iteration stops when two successive extrapolants
/// differ by less than tol * max(1, |R_m|) in max-norm. tail_est is twice
/// that last increment plus a rounding allowance. This is an empirical
/// estimate, not a proven bound.
TruncatedProduct r_m(int m, int l, double lambda, double mu, double tol = 1e-12,
                     long max_factors = kMaxProductFactors);
TruncatedProduct r_m(int m, const HeunParams& p, double tol = 1e-12);

struct XiValue {
    double value = 0.0;
    double err = 0.0;
    double scale = 0.0; ///< |lambda| |R00| + mu^2 |R10|
    long J = 0;

    /// +1 / -1 when the interval [value - err, value + err] excludes 0, else 0.
    int certified_sign() const;
};

XiValue xi_l(int l, double lambda, double mu, double tol = 1e-12);
XiValue xi_l(const HeunParams& p, double tol = 1e-12);

/// lambda = (1/(2 omega))^2 - mu^2, mu = A/(2 omega).
HeunParams josephson_heun_params(int l, double omega, double A);

struct XiRoot {
    double A = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
    double xi_residual = 0.0;  ///< |xi| at A
    double bracket_lo = 0.0;   ///< certified sign change inside [bracket_lo, bracket_hi]
    double bracket_hi = 0.0;
    bool suspected = false;    ///< |xi| dips to within err without a sign change
};

struct RootScanOptions {
    double grid_step = 0.02;
    double bracket_halfwidth = 4e-6;
    double xi_tol = 1e-12;
    bool parallel = true;
};

/// Roots of A -> xi_l(lambda(A), mu(A)) on (0, A_max], refined to |dA| < tol.
std::vector<XiRoot> xi_roots_on_line(int l, double omega, double A_max, double tol,
                                     const RootScanOptions& opt = {});

struct XiGridSample {
    double A;
    XiValue xi;
};

/// The grid A_i = i h, h = A_max / ceil(A_max / grid_step).
std::vector<XiGridSample> xi_grid(int l, double omega, double A_max, double grid_step,
                                  bool parallel);

/// Root table; defect_crosscheck is the entire-solution defect at each root.
std::string roots_csv(int l, double omega, const std::vector<XiRoot>& roots,
                      const std::vector<double>& defects);

} // namespace heunlock
