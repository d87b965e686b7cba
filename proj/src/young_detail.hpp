#pragma once

// Shared internals of the determinant code: permutation expansion with error
// propagation and the precision-escalation driver.

#include "heunlock/errors.hpp"
#include "heunlock/mpreal.hpp"
#include "heunlock/specfun.hpp"
#include "heunlock/youngdet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace heunlock::detail {

struct Permutation {
    std::vector<int> image;
    int parity; // +1 even, -1 odd
};

/// All permutations of {0..l-1} with parities (cached per l).
const std::vector<Permutation>& permutations(int l);

/// Parity of the permutation that sorts `v` into strictly decreasing order;
/// 0 when `v` has repeated entries.
int sorting_parity(std::vector<int>& v);

/// Bessel values and absolute error bounds indexed by |j| in [0, jmax].
template <class Real>
struct EntryTable {
    std::vector<Real> value;
    std::vector<Real> err;

    const Real& v(int j) const { return value[static_cast<std::size_t>(std::abs(j))]; }
    const Real& e(int j) const { return err[static_cast<std::size_t>(std::abs(j))]; }
};

template <class Real>
EntryTable<Real> make_entry_table(int jmax, double x, unsigned bits, double tol)
{
    EntryTable<Real> t;
    t.value.reserve(static_cast<std::size_t>(jmax) + 1);
    t.err.reserve(static_cast<std::size_t>(jmax) + 1);
    for (int j = 0; j <= jmax; ++j) {
        auto b = bessel_series<Real>(j, x, bits, tol);
        t.value.push_back(std::move(b.value));
        t.err.push_back(std::move(b.err));
    }
    return t;
}

/// Largest |k_j - n_i| for a pair of tuples.
inline int max_offset(const std::vector<int>& k, const std::vector<int>& n)
{
    int m = 0;
    for (int a : k)
        for (int b : n)
            m = std::max(m, std::abs(a - b));
    return m;
}

/// Leibniz expansion of det[I_{k_j - n_i}] with a forward error bound.
///
/// Each product over a permutation is bracketed by prod |a| and
/// prod (|a| + e); the difference bounds the propagated entry error. Rounding
/// in the l-1 products and the final summation adds (l + l!) u prod (|a| + e).
template <class Real>
Bounded<Real> leibniz(const std::vector<int>& k, const std::vector<int>& n,
                      const EntryTable<Real>& t, unsigned bits)
{
    using std::abs;
    const int l = static_cast<int>(k.size());
    const auto& perms = permutations(l);
    Real sum = make_real<Real>(0.0, bits);
    Real spread = make_real<Real>(0.0, bits);
    Real magnitude = make_real<Real>(0.0, bits);
    for (const auto& p : perms) {
        Real prod = make_real<Real>(static_cast<double>(p.parity), bits);
        Real lower = make_real<Real>(1.0, bits);
        Real upper = make_real<Real>(1.0, bits);
        for (int i = 0; i < l; ++i) {
            const int col = p.image[static_cast<std::size_t>(i)];
            const int idx = k[static_cast<std::size_t>(col)] - n[static_cast<std::size_t>(i)];
            const Real& a = t.v(idx);
            prod *= a;
            const Real aa = abs(a);
            lower *= aa;
            upper *= aa + t.e(idx);
        }
        sum += prod;
        spread += upper - lower;
        magnitude += upper;
    }
    const double u = unit_roundoff(bits);
    const double gamma = (static_cast<double>(l) + static_cast<double>(perms.size()) + 2.0) * u;
    Real err = spread * (1.0 + 4.0 * gamma) + magnitude * (gamma * 1.01);
    return {sum, err};
}

/// Escalation ladder: 53 -> 64 -> 128 -> 256 -> ... capped at `ceiling`.
std::vector<unsigned> precision_ladder(const Precision& prec, unsigned ceiling);

/// Classify a (value, err) pair that has been rounded to double.
Sign classify(double value, double err);

/// Round a multiprecision bound to double while keeping it a bound.
template <class Real>
std::pair<double, double> round_bounded(const Bounded<Real>& b)
{
    const double v = to_double(b.value);
    double e = to_double(b.err);
    e = e * (1.0 + 4.0 * unit_roundoff(53)) + std::abs(v) * unit_roundoff(53);
    return {v, e};
}

/// Runs the precision ladder. `eval53(bits)` and `evalmp(bits)` return the
/// bounded determinant at the given precision.
SignedDet certify_with_ladder(
    const std::vector<unsigned>& ladder,
    const std::function<Bounded<double>()>& eval53,
    const std::function<Bounded<MpReal>(unsigned)>& evalmp);

/// Certified sign for diagrams k, n at x without the contradiction check.
SignedDet certify_det(const std::vector<int>& k, const std::vector<int>& n, double x,
                      const Precision& prec, unsigned ceiling);

} // namespace heunlock::detail
