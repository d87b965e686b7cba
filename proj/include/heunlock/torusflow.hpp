#pragma once

// The RSJ family  dphi/dt = -sin(phi) + B + A cos(omega t)  in the torus time
// tau = omega t:
//
//   dphi/dtau = -sin(phi)/omega + l + 2 mu cos(tau),   l = B/omega, mu = A/(2 omega).
//
// With Phi = exp(i phi) this is the projectivization of the linear system
//
//   du/dtau = -i (l + 2 mu cos tau) u + v/(2 omega),   dv/dtau = u/(2 omega),
//
// (the z = exp(i tau) form of it has singularities only at 0 and infinity).
// |u|^2 - |v|^2 is conserved, so the monodromy lies in U(1,1) up to the
// scalar factor fixed by det M = exp(-2 pi i l).

#include "heunlock/heunrec.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace heunlock {

struct JosephsonParams {
    double omega = 1.0;
    double B = 0.0;
    double A = 0.0;

    JosephsonParams() = default;
    JosephsonParams(double omega_, double B_, double A_);

    double l() const { return B / omega; }
    double mu() const { return A / (2.0 * omega); }
    double lambda() const { return 1.0 / (4.0 * omega * omega) - mu() * mu(); }
    /// HeunParams for integer l >= 0 and A > 0 (DomainError otherwise).
    HeunParams heun() const;
};

/// Lift phi(tau1) of the solution through (tau0, phi0); adaptive Dormand-Prince
/// with absolute and relative local tolerance tol.
double flow_step(const JosephsonParams& p, double phi0, double tau0, double tau1,
                 double tol = 1e-10);

struct RotationResult {
    double rho = 0.0;
    double conf = 0.0;
    int periods = 0;
};

/// Weights exp(-1/(t(1-t))) on (0, 1), used for the weighted lift average.
double birkhoff_weight(double t);

/// rho = weighted average over k < periods of (phi(2 pi (k+1)) - phi(2 pi k)) / (2 pi),
/// with the smooth weight birkhoff_weight((k + 1/2)/periods). The plain
/// average (phi(2 pi P) - phi(0))/(2 pi P) differs from rho by O(1/P); conf
/// is 2 max w / sum w (about 5.2/P) plus 10 tol.
RotationResult rotation_number(const JosephsonParams& p, int periods, double tol = 1e-10);

/// Same estimator from the lifts phi_0..phi_P at tau = 2 pi k.
RotationResult rotation_from_lifts(const std::vector<double>& lifts, double tol);

struct Monodromy2 {
    std::array<std::complex<double>, 4> m{}; ///< row-major, basis (u, v) at tau = 0
    double tol = 0.0;

    std::complex<double> det() const;
    std::complex<double> trace() const;
    /// exp of the integrated trace of the coefficient matrix, exp(-2 pi i l).
    std::complex<double> liouville_det(double l) const;
    double distance_to_identity() const; ///< max-norm of M - I
    Monodromy2 operator*(const Monodromy2& o) const;
};

/// Fundamental matrix at tau = 2 pi with X(0) = I.
Monodromy2 monodromy(const JosephsonParams& p, double tol = 1e-12);
/// X(0) for the solution with X(2 pi) = I (integrated backwards), i.e. M^{-1}.
Monodromy2 monodromy_reverse(const JosephsonParams& p, double tol = 1e-12);

/// Period map of the real torus field built from the monodromy:
///   F(phi) = phi + Arg(1 + r2 e^{-i phi}) - Arg(1 + r1 e^{i phi}) + C,
/// r1 = m12/m11, r2 = m21/m22, C = arg m22 - arg m11 + 2 pi k with the integer
/// k fixed by one direct integration of the real field.
class PeriodMap {
public:
    PeriodMap(const JosephsonParams& p, double tol = 1e-12);
    double operator()(double phi) const;
    const Monodromy2& monodromy_matrix() const { return mono_; }
    long winding() const { return k_; }

private:
    Monodromy2 mono_;
    std::complex<double> r1_, r2_;
    double c_ = 0.0;
    long k_ = 0;
};

/// The rotation_number estimator applied to iterates of PeriodMap.
RotationResult rotation_number_fast(const JosephsonParams& p, int periods, double tol = 1e-12);

struct LockInterval {
    bool empty = true;
    double lo = 0.0;
    double hi = 0.0;
    bool reliable = true;
    std::string diagnostic;
    double width() const { return empty ? 0.0 : hi - lo; }
};

struct LockSearchOptions {
    int periods = 400;
    double rho_tol = 1e-6;  ///< |rho - lvl| accepted as locked
    double integ_tol = 1e-10;
    int monotonicity_samples = 16;
    bool fast = false;      ///< use the period map instead of direct integration
};

/// {B : rho(B, A) = lvl} at fixed A as [B-, B+] by bisection, relying on
/// monotonicity of rho in B (spot-checked on a sample grid; violations set
/// reliable = false). Empty when the width is below tol.
LockInterval phase_lock_interval(int lvl, double A, double omega, double tol,
                                 const LockSearchOptions& opt = {});

/// B-width of {B : |rho(B, A) - target| < delta}; for a monotone rho this is
/// the distance between the crossings of target - delta and target + delta.
struct LevelWidth {
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0;
    bool reliable = true;
};

LevelWidth level_set_width(double target, double A, double omega, double delta, double tol,
                           const LockSearchOptions& opt = {});

struct AdjacencyReport {
    int l = 0;
    double omega = 0.0;
    double A = 0.0;
    double B = 0.0;
    double xi_residual = 0.0;
    double entire_solution_defect = 0.0;
    double rho = 0.0;
    double rho_conf = 0.0;
    bool rho_equals_l = false;
    bool parity_constraint = false;
    bool magnitude_constraint = false;
    double monodromy_distance = 0.0;

    std::string to_json() const;
};

struct AdjacencyOptions {
    int periods = 1000;
    double rho_tol = 1e-3;
    double integ_tol = 1e-12;
};

AdjacencyReport adjacency_verify(int lvl, double omega, double A,
                                 const AdjacencyOptions& opt = {});

} // namespace heunlock
