#pragma once

// Determinants f_{k,n}(x) = det A_{k,n}, (A_{k,n})_{ij} = I_{k_j - n_i}(x), over
// pairs of two-sided Young diagrams, with certified signs and the lattice
// identities they satisfy.

#include "heunlock/precision.hpp"

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace heunlock {

/// Strictly decreasing integer tuple k_1 > ... > k_l, l >= 1.
class Diagram {
public:
    explicit Diagram(std::vector<int> parts);

    /// (l-1, ..., 1, 0).
    static Diagram staircase(int l);

    int size() const { return static_cast<int>(parts_.size()); }
    int operator[](int i) const { return parts_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& parts() const { return parts_; }
    int max_abs() const;
    std::string to_string() const;

    auto operator<=>(const Diagram&) const = default;

private:
    std::vector<int> parts_;
};

/// All diagrams of length l with components in [lo, hi], in lexicographic order
/// of the (decreasing) tuples.
std::vector<Diagram> enumerate_diagrams(int l, int lo, int hi);

/// Dense row-major square matrix.
struct SquareMatrix {
    int n = 0;
    std::vector<double> a;

    SquareMatrix() = default;
    explicit SquareMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

enum class Sign { positive, negative, zero, undetermined };

const char* to_string(Sign s);

struct SignedDet {
    double value = 0.0;
    double err = 0.0;
    Sign sign = Sign::undetermined;
    unsigned bits = 53;     ///< precision at which the sign was settled
    std::string diagnostic; ///< set when the sign stayed undetermined
};

/// Default ceiling for precision escalation during sign certification.
inline constexpr unsigned kDefaultCeilingBits = 512;

/// Largest l for which determinants are expanded over permutations.
inline constexpr int kMaxDetOrder = 6;

SquareMatrix build_matrix(const Diagram& k, const Diagram& n, double x,
                          const Precision& prec = Precision::hardware());

/// f_{k,n}(x) with a forward error bound and a certified sign. Escalates
/// precision (53, 64, 128, ... up to `ceiling_bits`) until the interval
/// value +- err excludes zero. For x > 0 a certified non-positive sign
/// throws ContradictionError; an unresolved sign is returned as undetermined.
SignedDet det_f(const Diagram& k, const Diagram& n, double x,
                const Precision& prec = Precision::hardware(),
                unsigned ceiling_bits = kDefaultCeilingBits);

/// f_{k,n} for arbitrary integer tuples: zero on repeated entries, otherwise
/// the sorted determinant times the parities of the sorting permutations.
SignedDet det_f_signed(const std::vector<int>& k, const std::vector<int>& n, double x,
                       const Precision& prec = Precision::hardware());

struct ScanEntry {
    Diagram k;
    Diagram n;
    double x = 0.0;
    double value = 0.0;
    double err = 0.0;
    Sign sign = Sign::undetermined;
};

struct ScanReport {
    int l = 0;
    int radius = 0;
    std::vector<double> xs;
    std::vector<ScanEntry> entries; ///< ordered by (x, k, n)
    double min_value = 0.0;         ///< smallest certified-positive value
    std::size_t unresolved = 0;
    std::size_t nonpositive = 0;

    bool complete() const { return unresolved == 0; }
    bool all_positive() const { return unresolved == 0 && nonpositive == 0; }
    /// Columns k, n, x, value, err, sign; tuples written as "[k1 k2 ...]".
    std::string to_csv() const;
};

/// Certified sign of every f_{k,n}(x), k and n ranging over diagrams with
/// components in [-radius, radius]. OpenMP-parallel over pairs; results are
/// stored by index so the report is independent of the thread count.
ScanReport positivity_scan(int l, int radius, std::span<const double> xs,
                           const Precision& prec = Precision::hardware(),
                           unsigned ceiling_bits = kDefaultCeilingBits);

/// Single-threaded reference for positivity_scan.
ScanReport positivity_scan_serial(int l, int radius, std::span<const double> xs,
                                  const Precision& prec = Precision::hardware(),
                                  unsigned ceiling_bits = kDefaultCeilingBits);

/// Values f(k) on all diagrams with components in [-radius, radius]; any tuple
/// with a repeated component reads as 0.
class LatticeWindow {
public:
    LatticeWindow(int l, int radius);

    /// f(k) = f_{k,n}(x) over the window.
    static LatticeWindow of_determinants(const Diagram& n, double x, int radius,
                                         const Precision& prec = Precision::hardware());

    int l() const { return l_; }
    int radius() const { return radius_; }
    void set(const Diagram& k, double v);
    /// Strictly decreasing tuples inside the window return their value; tuples
    /// with repeats return 0. Anything else throws DomainError.
    double get(const std::vector<int>& k) const;
    /// Every +-1 neighbor of k stays inside the window.
    bool is_interior(const Diagram& k) const;
    std::size_t size() const { return entries_.size(); }

private:
    int l_;
    int radius_;
    std::map<std::vector<int>, double> entries_;
};

/// Sum over components s of f(k - e_s) + f(k + e_s): the Laplacian plus 2l
/// times the identity, applied at an interior diagram.
double laplacian_rhs(const LatticeWindow& w, const Diagram& k);

/// |central difference of f_{k,n} at x with step h - (1/2) laplacian sum|.
/// Evaluated in at least 128-bit arithmetic so the difference quotient does
/// not lose digits to cancellation; the result is the O(h^2) truncation term.
double ode_residual(const Diagram& k, const Diagram& n, double x, double h,
                    const Precision& prec = Precision::hardware());

/// Sum of f_{k,n}(x)^2 over diagrams with components in [-radius, radius].
double hilbert_norm_partial(const Diagram& n, double x, int radius,
                            const Precision& prec = Precision::hardware());

/// Laurent coefficient at z^k of Delta_n(z) * prod_i M(a; z_i), with
/// M(a; w) = sum_{|j|<=J} I_j(x) w^j, by dense multivariate multiplication.
double generating_coeff_oracle(const Diagram& n, const Diagram& k, double x, int J,
                               const Precision& prec = Precision::hardware());

/// det[z_c^{n_r}] for an integer exponent tuple n.
std::complex<double> vandermonde_delta(std::span<const int> n,
                                       std::span<const std::complex<double>> z);

/// M_n(a; z) = Delta_n(z) prod_i M(a; z_i) with the truncated series above.
std::complex<double> generating_function_value(std::span<const int> n, double x,
                                               std::span<const std::complex<double>> z, int J);

/// |M_{base+lam}(a;z) - (Delta_{base+lam}(z)/Delta_base(z)) M_base(a;z)|.
/// With base = (l-1, ..., 0) the ratio is the Schur function s_lam.
double schur_identity_check(std::span<const int> lam, const Diagram& base, double x,
                            std::span<const std::complex<double>> z, int J);

} // namespace heunlock
