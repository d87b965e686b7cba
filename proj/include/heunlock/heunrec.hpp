#pragma once

// Taylor-coefficient recurrences for the double confluent Heun pair
//
//   z^2 E'' + ((l+1) z + mu (1 - z^2)) E' + (lambda - mu (l+1) z) E = 0   (first)
//   z^2 E'' + ((1-l) z + mu (1 - z^2)) E' + (lambda + mu (l-1) z) E = 0   (second)
//
// Substituting E = sum a_n z^n into the first equation gives, at z^n,
//
//   mu (n+1) a_{n+1} + (n (n+l) + lambda) a_n - mu (n+l) a_{n-1} = 0,
//
// and the second equation is the same with l -> -l. Entire solutions of the
// first equation are the minimal solution of this recurrence; the second
// equation has polynomial solutions of degree l-1 on a finite lambda-set.
// The canonical Heun form is recovered by v = exp(-mu z) E.

#include "heunlock/precision.hpp"
#include "heunlock/youngdet.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace heunlock {

struct HeunParams {
    int l = 0;
    double lambda = 0.0;
    double mu = 1.0;

    HeunParams() = default;
    HeunParams(int l_, double lambda_, double mu_);
};

/// Coefficients of c_plus a_{n+1} + c_zero a_n + c_minus a_{n-1} = 0.
struct RecurrenceCoeffs {
    double c_plus;
    double c_zero;
    double c_minus;
};

RecurrenceCoeffs recurrence_coeffs_heun1(int n, const HeunParams& p);
RecurrenceCoeffs recurrence_coeffs_heun2(int n, const HeunParams& p);

struct TaylorSolution {
    enum class Normalization { leading_one, unit_max };

    std::vector<double> coeffs; ///< a_0 .. a_N
    int N = 0;
    Normalization normalization = Normalization::leading_one;
    /// Residual of the n = 0 relation, scaled as in entire_solution_defect.
    double boundary_defect = 0.0;
};

/// a_0 = 1, a_1 = -lambda/mu, then the recurrence upward. For generic
/// parameters this picks up the dominant (factorially growing) solution.
TaylorSolution forward_taylor_heun1(const HeunParams& p, int N);

/// Backward recurrence from a_{N+1} = 0, a_N = 1 down to a_0, normalized to
/// max |a_n| = 1. This converges to the minimal solution for large N.
TaylorSolution backward_taylor_heun1(const HeunParams& p, int N);

/// |left-hand side of the first equation| for the series truncated at `trunc`.
double heun1_residual(const TaylorSolution& sol, const HeunParams& p, std::complex<double> z,
                      int trunc);

/// |left-hand side of the second equation| for a polynomial with the given
/// coefficients.
double heun2_residual(const std::vector<double>& coeffs, const HeunParams& p,
                      std::complex<double> z);

/// Defect of the backward-recurrence solution at the n = 0 relation,
///     (mu a_1 + lambda a_0) / (mu max(l, 1) max_n |a_n|),
/// which equals a_{-1}/max|a_n| for l >= 1. Zero exactly when the first
/// equation admits an entire solution (in the limit N -> infinity).
double entire_solution_defect(const HeunParams& p, int N,
                              const Precision& prec = Precision::hardware());

/// max(200, 20 l + 10 ceil(|lambda| + mu^2)).
int default_backward_depth(const HeunParams& p);

struct DefectEstimate {
    double defect = 0.0;
    int N = 0;
    bool stable = false;
};

/// entire_solution_defect at the default depth, doubled until two successive
/// values agree to two significant digits (or to 1e-14 absolutely).
DefectEstimate entire_solution_defect_auto(const HeunParams& p, int max_doublings = 6);

struct PolySolution {
    std::vector<double> coeffs; ///< a_0 .. a_{l-1}, scaled to a_0 = 1
    double kernel_residual = 0.0;
    int degree() const;
};

enum class PolyStatus { exists, none, undetermined };

struct PolyOutcome {
    PolyStatus status = PolyStatus::none;
    std::optional<PolySolution> solution;
    double determinant = 0.0; ///< det of the l x l tridiagonal system
    double scale = 0.0;       ///< max-norm of the relations as an l x (l+1) block
    std::string diagnostic;
};

/// Determinant of the l x l tridiagonal system from the second equation's
/// relations n = 0..l-1 with a_l = 0. A polynomial of degree l-1 solves the
/// second equation iff this vanishes.
double heun2_system_determinant(int l, double lambda, double mu);

/// |det| < 1e-10 scale^l counts as zero (solution returned); |det| below
/// 1e-6 scale^l is reported undetermined.
PolyOutcome poly_solution_heun2(const HeunParams& p, const Precision& prec = Precision::hardware());

/// All lambda (ascending) at which the second equation has a polynomial
/// solution for the given l >= 1 and mu > 0. The system is a Jacobi matrix
/// up to diagonal similarity, so the l roots are real and simple; they are
/// located by Sturm-count bisection.
std::vector<double> poly_existence_lambdas(int l, double mu);

/// Laurent coefficients at z^s, s = -l..-1, of exp(mu (z + 1/z)) P(-1/z),
/// computed both by series convolution and as A_{k,n}^T w with the Bessel
/// matrix of k = (l..1), n = (l-1..0) at x = 2 mu.
struct RombPaths {
    std::vector<double> convolution;
    std::vector<double> matrix;
};

RombPaths romb_laurent_paths(const PolySolution& poly, double mu, int l,
                             const Precision& prec = Precision::hardware());

/// The convolution path, after checking agreement with the matrix path to
/// 1e-10 relative to the coefficient scale (ConsistencyError otherwise).
std::vector<double> romb_laurent_coeffs(const PolySolution& poly, double mu, int l,
                                        const Precision& prec = Precision::hardware());

/// f_{k,n}(x) for k = (l, ..., 1), n = (l-1, ..., 0).
SignedDet delta_det(int l, double x, const Precision& prec = Precision::hardware());

/// "n,a_n" rows for a Taylor solution.
std::string solution_csv(const TaylorSolution& sol);

} // namespace heunlock
