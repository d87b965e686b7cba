#include "heunlock/youngdet.hpp"

#include "young_detail.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace heunlock {

// ---------------------------------------------------------------- Diagram

Diagram::Diagram(std::vector<int> parts) : parts_(std::move(parts))
{
    if (parts_.empty())
        throw DomainError("a diagram needs at least one component");
    for (std::size_t i = 1; i < parts_.size(); ++i)
        if (!(parts_[i - 1] > parts_[i]))
            throw DomainError("diagram components must be strictly decreasing");
}

Diagram Diagram::staircase(int l)
{
    if (l < 1)
        throw DomainError("staircase needs l >= 1");
    std::vector<int> p(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i)
        p[static_cast<std::size_t>(i)] = l - 1 - i;
    return Diagram(std::move(p));
}

int Diagram::max_abs() const
{
    int m = 0;
    for (int v : parts_)
        m = std::max(m, std::abs(v));
    return m;
}

std::string Diagram::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < parts_.size(); ++i)
        os << (i ? " " : "") << parts_[i];
    os << ']';
    return os.str();
}

std::vector<Diagram> enumerate_diagrams(int l, int lo, int hi)
{
    if (l < 1)
        throw DomainError("enumerate_diagrams needs l >= 1");
    std::vector<Diagram> out;
    std::vector<int> cur;
    // Depth-first with decreasing components; emits in lexicographic order
    // of reversed magnitude, which is deterministic and all that matters.
    std::function<void(int)> rec = [&](int upper) {
        if (static_cast<int>(cur.size()) == l) {
            out.emplace_back(cur);
            return;
        }
        const int remaining = l - static_cast<int>(cur.size());
        for (int v = lo + remaining - 1; v <= upper; ++v) {
            cur.push_back(v);
            rec(v - 1);
            cur.pop_back();
        }
    };
    rec(hi);
    return out;
}

const char* to_string(Sign s)
{
    switch (s) {
    case Sign::positive: return "positive";
    case Sign::negative: return "negative";
    case Sign::zero: return "zero";
    case Sign::undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace detail {

const std::vector<Permutation>& permutations(int l)
{
    if (l < 1 || l > kMaxDetOrder)
        throw DomainError("determinant order outside the supported range 1..6");
    static std::once_flag flags[kMaxDetOrder + 1];
    static std::vector<Permutation> cache[kMaxDetOrder + 1];
    std::call_once(flags[l], [l] {
        std::vector<int> p(static_cast<std::size_t>(l));
        std::iota(p.begin(), p.end(), 0);
        do {
            int inversions = 0;
            for (int i = 0; i < l; ++i)
                for (int j = i + 1; j < l; ++j)
                    if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)])
                        ++inversions;
            cache[l].push_back({p, inversions % 2 == 0 ? 1 : -1});
        } while (std::next_permutation(p.begin(), p.end()));
    });
    return cache[l];
}

int sorting_parity(std::vector<int>& v)
{
    int parity = 1;
    // Insertion sort into decreasing order, counting transpositions.
    for (std::size_t i = 1; i < v.size(); ++i) {
        for (std::size_t j = i; j > 0 && v[j - 1] <= v[j]; --j) {
            if (v[j - 1] == v[j])
                return 0;
            std::swap(v[j - 1], v[j]);
            parity = -parity;
        }
    }
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] == v[i])
            return 0;
    return parity;
}

std::vector<unsigned> precision_ladder(const Precision& prec, unsigned ceiling)
{
    std::vector<unsigned> ladder;
    unsigned b = prec.working_bits();
    ladder.push_back(b);
    if (b == 53) {
        b = 64;
        if (b <= ceiling)
            ladder.push_back(b);
    }
    while (b < ceiling) {
        b = std::min(2 * b, ceiling);
        ladder.push_back(b);
    }
    return ladder;
}

Sign classify(double value, double err)
{
    if (value == 0.0 && err == 0.0)
        return Sign::zero;
    if (value - err > 0.0)
        return Sign::positive;
    if (value + err < 0.0)
        return Sign::negative;
    return Sign::undetermined;
}

SignedDet certify_with_ladder(const std::vector<unsigned>& ladder,
                              const std::function<Bounded<double>()>& eval53,
                              const std::function<Bounded<MpReal>(unsigned)>& evalmp)
{
    SignedDet out;
    for (unsigned bits : ladder) {
        std::pair<double, double> r;
        if (bits == 53)
            r = round_bounded(eval53());
        else
            r = round_bounded(evalmp(bits));
        out.value = r.first;
        out.err = r.second;
        out.bits = bits;
        out.sign = classify(r.first, r.second);
        if (out.sign != Sign::undetermined)
            return out;
    }
    std::ostringstream os;
    os << "sign undetermined at " << out.bits << " bits: value " << out.value << " err "
       << out.err;
    out.diagnostic = os.str();
    return out;
}

SignedDet certify_det(const std::vector<int>& k, const std::vector<int>& n, double x,
                      const Precision& prec, unsigned ceiling)
{
    const int jmax = max_offset(k, n);
    const auto ladder = precision_ladder(prec, std::max(ceiling, prec.working_bits()));
    return certify_with_ladder(
        ladder,
        [&] {
            const auto t = make_entry_table<double>(jmax, x, 53, prec.tol);
            return leibniz(k, n, t, 53);
        },
        [&](unsigned bits) {
            const auto t = make_entry_table<MpReal>(jmax, x, bits, prec.tol);
            return leibniz(k, n, t, bits);
        });
}

} // namespace detail

// ------------------------------------------------------------ determinants

namespace {

void check_pair(const Diagram& k, const Diagram& n)
{
    if (k.size() != n.size())
        throw DomainError("diagrams k and n must have the same length");
    if (k.size() > kMaxDetOrder)
        throw DomainError("determinant order outside the supported range 1..6");
}

} // namespace

SquareMatrix build_matrix(const Diagram& k, const Diagram& n, double x, const Precision& prec)
{
    check_pair(k, n);
    const int l = k.size();
    SquareMatrix m(l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            m(i, j) = bessel_i(k[j] - n[i], x, prec);
    return m;
}

SignedDet det_f(const Diagram& k, const Diagram& n, double x, const Precision& prec,
                unsigned ceiling_bits)
{
    check_pair(k, n);
    if (!std::isfinite(x) || x < 0.0)
        throw DomainError("det_f requires finite x >= 0");
    SignedDet d = detail::certify_det(k.parts(), n.parts(), x, prec, ceiling_bits);
    if (x > 0.0 && (d.sign == Sign::negative || d.sign == Sign::zero)) {
        std::ostringstream os;
        os << "certified " << to_string(d.sign) << " determinant f_{" << k.to_string() << ","
           << n.to_string() << "}(" << x << ") = " << d.value << " +- " << d.err;
        throw ContradictionError(os.str());
    }
    return d;
}

SignedDet det_f_signed(const std::vector<int>& k, const std::vector<int>& n, double x,
                       const Precision& prec)
{
    if (k.size() != n.size() || k.empty())
        throw DomainError("tuples k and n must have the same nonzero length");
    std::vector<int> ks = k;
    std::vector<int> ns = n;
    const int pk = detail::sorting_parity(ks);
    const int pn = detail::sorting_parity(ns);
    if (pk == 0 || pn == 0)
        return SignedDet{0.0, 0.0, Sign::zero, prec.working_bits(), {}};
    SignedDet d = det_f(Diagram(ks), Diagram(ns), x, prec);
    if (pk * pn < 0) {
        d.value = -d.value;
        if (d.sign == Sign::positive)
            d.sign = Sign::negative;
        else if (d.sign == Sign::negative)
            d.sign = Sign::positive;
    }
    return d;
}

// ---------------------------------------------------------- lattice window

LatticeWindow::LatticeWindow(int l, int radius) : l_(l), radius_(radius)
{
    if (l < 1 || radius < 1)
        throw DomainError("lattice window needs l >= 1 and radius >= 1");
}

LatticeWindow LatticeWindow::of_determinants(const Diagram& n, double x, int radius,
                                              const Precision& prec)
{
    LatticeWindow w(n.size(), radius);
    for (const auto& k : enumerate_diagrams(n.size(), -radius, radius))
        w.set(k, det_f(k, n, x, prec).value);
    return w;
}

void LatticeWindow::set(const Diagram& k, double v)
{
    if (k.size() != l_)
        throw DomainError("diagram length does not match the window");
    for (int c : k.parts())
        if (std::abs(c) > radius_)
            throw DomainError("diagram outside the lattice window");
    entries_[k.parts()] = v;
}

double LatticeWindow::get(const std::vector<int>& k) const
{
    if (static_cast<int>(k.size()) != l_)
        throw DomainError("tuple length does not match the window");
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = i + 1; j < k.size(); ++j)
            if (k[i] == k[j])
                return 0.0;
    auto it = entries_.find(k);
    if (it == entries_.end())
        throw DomainError("tuple not stored in the lattice window");
    return it->second;
}

bool LatticeWindow::is_interior(const Diagram& k) const
{
    return k.size() == l_ && k[0] + 1 <= radius_ && k[l_ - 1] - 1 >= -radius_;
}

double laplacian_rhs(const LatticeWindow& w, const Diagram& k)
{
    if (!w.is_interior(k))
        throw DomainError("laplacian_rhs needs an interior diagram");
    double sum = 0.0;
    std::vector<int> p = k.parts();
    for (std::size_t s = 0; s < p.size(); ++s) {
        p[s] -= 1;
        sum += w.get(p);
        p[s] += 2;
        sum += w.get(p);
        p[s] -= 1;
    }
    return sum;
}

namespace {

constexpr unsigned kResidualBits = 128;

// f for an arbitrary tuple at x, in multiprecision, zero on repeats.
MpReal signed_value_mp(std::vector<int> k, const Diagram& n,
                       const detail::EntryTable<MpReal>& t, unsigned bits)
{
    const int parity = detail::sorting_parity(k);
    if (parity == 0)
        return MpReal(0.0, bits);
    auto b = detail::leibniz(k, n.parts(), t, bits);
    return parity > 0 ? b.value : -b.value;
}

} // namespace

double ode_residual(const Diagram& k, const Diagram& n, double x, double h, const Precision& prec)
{
    check_pair(k, n);
    if (!(h > 0.0) || h > 1e-3)
        throw DomainError("ode_residual requires 0 < h <= 1e-3");
    if (!(x > h))
        throw DomainError("ode_residual requires x > h");
    const unsigned bits = std::max(prec.working_bits(), kResidualBits);
    const int jmax = detail::max_offset(k.parts(), n.parts()) + 1;
    const auto tp = detail::make_entry_table<MpReal>(jmax, x + h, bits, prec.tol * 1e-20);
    const auto tm = detail::make_entry_table<MpReal>(jmax, x - h, bits, prec.tol * 1e-20);
    const auto t0 = detail::make_entry_table<MpReal>(jmax, x, bits, prec.tol * 1e-20);

    const MpReal fp = detail::leibniz(k.parts(), n.parts(), tp, bits).value;
    const MpReal fm = detail::leibniz(k.parts(), n.parts(), tm, bits).value;
    const MpReal derivative = (fp - fm) / (2.0 * h);

    MpReal rhs(0.0, bits);
    std::vector<int> p = k.parts();
    for (std::size_t s = 0; s < p.size(); ++s) {
        p[s] -= 1;
        rhs += signed_value_mp(p, n, t0, bits);
        p[s] += 2;
        rhs += signed_value_mp(p, n, t0, bits);
        p[s] -= 1;
    }
    rhs *= 0.5;
    return abs(derivative - rhs).to_double();
}

double hilbert_norm_partial(const Diagram& n, double x, int radius, const Precision& prec)
{
    if (radius < n.max_abs())
        throw DomainError("hilbert_norm_partial needs radius >= max |n_i|");
    const auto table = detail::make_entry_table<double>(2 * radius, x, 53, prec.tol);
    double sum = 0.0;
    for (const auto& k : enumerate_diagrams(n.size(), -radius, radius)) {
        const double f = detail::leibniz(k.parts(), n.parts(), table, 53).value;
        sum += f * f;
    }
    return sum;
}

// ------------------------------------------------ generating-function oracle

namespace {

/// Dense Laurent polynomial in l variables on a box of exponents.
class LaurentPoly {
public:
    LaurentPoly(std::vector<int> lo, std::vector<int> hi) : lo_(std::move(lo)), hi_(std::move(hi))
    {
        std::size_t n = 1;
        for (std::size_t d = 0; d < lo_.size(); ++d)
            n *= static_cast<std::size_t>(hi_[d] - lo_[d] + 1);
        c_.assign(n, 0.0);
    }

    int dims() const { return static_cast<int>(lo_.size()); }

    double& at(const std::vector<int>& e) { return c_[offset(e)]; }

    double get(const std::vector<int>& e) const
    {
        for (std::size_t d = 0; d < lo_.size(); ++d)
            if (e[d] < lo_[d] || e[d] > hi_[d])
                return 0.0;
        return c_[offset(e)];
    }

    template <class F>
    void for_each(F&& f) const
    {
        std::vector<int> e = lo_;
        for (std::size_t idx = 0; idx < c_.size(); ++idx) {
            if (c_[idx] != 0.0)
                f(e, c_[idx]);
            for (std::size_t d = e.size(); d-- > 0;) {
                if (++e[d] <= hi_[d])
                    break;
                e[d] = lo_[d];
            }
        }
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        std::vector<int> lo(a.lo_.size()), hi(a.lo_.size());
        for (std::size_t d = 0; d < lo.size(); ++d) {
            lo[d] = a.lo_[d] + b.lo_[d];
            hi[d] = a.hi_[d] + b.hi_[d];
        }
        LaurentPoly r(lo, hi);
        std::vector<int> e(lo.size());
        a.for_each([&](const std::vector<int>& ea, double ca) {
            b.for_each([&](const std::vector<int>& eb, double cb) {
                for (std::size_t d = 0; d < e.size(); ++d)
                    e[d] = ea[d] + eb[d];
                r.at(e) += ca * cb;
            });
        });
        return r;
    }

private:
    std::size_t offset(const std::vector<int>& e) const
    {
        std::size_t off = 0;
        for (std::size_t d = 0; d < lo_.size(); ++d)
            off = off * static_cast<std::size_t>(hi_[d] - lo_[d] + 1) +
                  static_cast<std::size_t>(e[d] - lo_[d]);
        return off;
    }

    std::vector<int> lo_;
    std::vector<int> hi_;
    std::vector<double> c_;
};

} // namespace

double generating_coeff_oracle(const Diagram& n, const Diagram& k, double x, int J,
                               const Precision& prec)
{
    check_pair(k, n);
    const int l = n.size();
    if (l > 3)
        throw DomainError("generating_coeff_oracle supports l <= 3");
    if (J < 1)
        throw DomainError("generating_coeff_oracle needs J >= 1");

    // Delta_n(z) = det[z_c^{n_r}] expanded as a Laurent polynomial.
    std::vector<int> lo(static_cast<std::size_t>(l), n[l - 1]);
    std::vector<int> hi(static_cast<std::size_t>(l), n[0]);
    LaurentPoly delta(lo, hi);
    for (const auto& p : detail::permutations(l)) {
        std::vector<int> e(static_cast<std::size_t>(l));
        for (int r = 0; r < l; ++r)
            e[static_cast<std::size_t>(p.image[static_cast<std::size_t>(r)])] = n[r];
        delta.at(e) += p.parity;
    }

    std::vector<double> a(static_cast<std::size_t>(2 * J + 1));
    for (int j = -J; j <= J; ++j)
        a[static_cast<std::size_t>(j + J)] = bessel_i(j, x, prec);

    LaurentPoly product = delta;
    for (int var = 0; var < l; ++var) {
        std::vector<int> flo(static_cast<std::size_t>(l), 0), fhi(static_cast<std::size_t>(l), 0);
        flo[static_cast<std::size_t>(var)] = -J;
        fhi[static_cast<std::size_t>(var)] = J;
        LaurentPoly series(flo, fhi);
        std::vector<int> e(static_cast<std::size_t>(l), 0);
        for (int j = -J; j <= J; ++j) {
            e[static_cast<std::size_t>(var)] = j;
            series.at(e) = a[static_cast<std::size_t>(j + J)];
        }
        product = product * series;
    }
    return product.get(k.parts());
}

std::complex<double> vandermonde_delta(std::span<const int> n,
                                       std::span<const std::complex<double>> z)
{
    if (n.size() != z.size() || n.empty())
        throw DomainError("vandermonde_delta needs equal nonzero lengths");
    const int l = static_cast<int>(n.size());
    for (int c = 0; c < l; ++c)
        for (int r = 0; r < l; ++r)
            if (z[static_cast<std::size_t>(c)] == 0.0 && n[static_cast<std::size_t>(r)] < 0)
                throw DomainError("zero variable raised to a negative power");
    std::complex<double> det = 0.0;
    for (const auto& p : detail::permutations(l)) {
        std::complex<double> prod = static_cast<double>(p.parity);
        for (int r = 0; r < l; ++r) {
            const int c = p.image[static_cast<std::size_t>(r)];
            prod *= std::pow(z[static_cast<std::size_t>(c)], n[static_cast<std::size_t>(r)]);
        }
        det += prod;
    }
    return det;
}

std::complex<double> generating_function_value(std::span<const int> n, double x,
                                               std::span<const std::complex<double>> z, int J)
{
    std::complex<double> prod = vandermonde_delta(n, z);
    for (const auto& zi : z) {
        std::complex<double> m = 0.0;
        for (int j = -J; j <= J; ++j)
            m += bessel_i(j, x) * std::pow(zi, j);
        prod *= m;
    }
    return prod;
}

double schur_identity_check(std::span<const int> lam, const Diagram& base, double x,
                            std::span<const std::complex<double>> z, int J)
{
    if (static_cast<int>(lam.size()) != base.size() || z.size() != lam.size())
        throw DomainError("schur_identity_check needs matching lengths");
    std::vector<int> shifted(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i)
        shifted[i] = base[static_cast<int>(i)] + lam[i];
    const auto lhs = generating_function_value(shifted, x, z, J);
    const auto ratio = vandermonde_delta(shifted, z) / vandermonde_delta(base.parts(), z);
    const auto rhs = ratio * generating_function_value(base.parts(), x, z, J);
    return std::abs(lhs - rhs);
}

} // namespace heunlock
