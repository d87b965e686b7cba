#include "heunlock/youngdet.hpp"

#include "young_detail.hpp"

#include <iomanip>
#include <limits>
#include <sstream>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace heunlock {

namespace {

// Bessel tables for one x at every rung of the precision ladder, built once
// and shared read-only by all pairs of the scan.
struct XTables {
    double x = 0.0;
    detail::EntryTable<double> hw;
    std::vector<std::pair<unsigned, detail::EntryTable<MpReal>>> mp;

    const detail::EntryTable<MpReal>& at_bits(unsigned bits) const
    {
        for (const auto& [b, t] : mp)
            if (b == bits)
                return t;
        throw DomainError("no table for the requested precision");
    }
};

struct ScanPlan {
    int l;
    int radius;
    std::vector<Diagram> diagrams;
    std::vector<XTables> tables;
    std::vector<unsigned> ladder;

    std::size_t pairs_per_x() const { return diagrams.size() * diagrams.size(); }
    std::size_t total() const { return tables.size() * pairs_per_x(); }
};

ScanPlan make_plan(int l, int radius, std::span<const double> xs, const Precision& prec,
                   unsigned ceiling)
{
    if (l < 1 || l > kMaxDetOrder)
        throw DomainError("positivity_scan needs 1 <= l <= 6");
    if (radius < 1)
        throw DomainError("positivity_scan needs radius >= 1");
    ScanPlan plan{l, radius, enumerate_diagrams(l, -radius, radius), {},
                  detail::precision_ladder(prec, std::max(ceiling, prec.working_bits()))};
    const int jmax = 2 * radius;
    for (double x : xs) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw DomainError("positivity_scan needs finite x > 0");
        XTables t;
        t.x = x;
        t.hw = detail::make_entry_table<double>(jmax, x, 53, prec.tol);
        for (unsigned b : plan.ladder)
            if (b != 53)
                t.mp.emplace_back(b, detail::make_entry_table<MpReal>(jmax, x, b, prec.tol));
        plan.tables.push_back(std::move(t));
    }
    return plan;
}

ScanEntry evaluate(const ScanPlan& plan, std::size_t idx)
{
    const std::size_t per_x = plan.pairs_per_x();
    const auto& t = plan.tables[idx / per_x];
    const std::size_t rem = idx % per_x;
    const Diagram& k = plan.diagrams[rem / plan.diagrams.size()];
    const Diagram& n = plan.diagrams[rem % plan.diagrams.size()];
    const SignedDet d = detail::certify_with_ladder(
        plan.ladder, [&] { return detail::leibniz(k.parts(), n.parts(), t.hw, 53); },
        [&](unsigned bits) { return detail::leibniz(k.parts(), n.parts(), t.at_bits(bits), bits); });
    return ScanEntry{k, n, t.x, d.value, d.err, d.sign};
}

ScanReport summarize(const ScanPlan& plan, std::vector<ScanEntry> entries, std::span<const double> xs)
{
    ScanReport r;
    r.l = plan.l;
    r.radius = plan.radius;
    r.xs.assign(xs.begin(), xs.end());
    r.min_value = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) {
        if (e.sign == Sign::undetermined)
            ++r.unresolved;
        else if (e.sign != Sign::positive)
            ++r.nonpositive;
        else
            r.min_value = std::min(r.min_value, e.value);
    }
    r.entries = std::move(entries);
    return r;
}

} // namespace

ScanReport positivity_scan_serial(int l, int radius, std::span<const double> xs,
                                  const Precision& prec, unsigned ceiling_bits)
{
    const ScanPlan plan = make_plan(l, radius, xs, prec, ceiling_bits);
    std::vector<ScanEntry> entries;
    entries.reserve(plan.total());
    for (std::size_t i = 0; i < plan.total(); ++i)
        entries.push_back(evaluate(plan, i));
    return summarize(plan, std::move(entries), xs);
}

ScanReport positivity_scan(int l, int radius, std::span<const double> xs, const Precision& prec,
                           unsigned ceiling_bits)
{
    const ScanPlan plan = make_plan(l, radius, xs, prec, ceiling_bits);
    const auto total = static_cast<std::ptrdiff_t>(plan.total());
    std::vector<ScanEntry> entries(plan.total(), ScanEntry{plan.diagrams[0], plan.diagrams[0]});
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < total; ++i)
        entries[static_cast<std::size_t>(i)] = evaluate(plan, static_cast<std::size_t>(i));
    return summarize(plan, std::move(entries), xs);
}

std::string ScanReport::to_csv() const
{
    std::ostringstream os;
    os << std::setprecision(12);
    os << "k,n,x,value,err,sign\n";
    for (const auto& e : entries)
        os << e.k.to_string() << ',' << e.n.to_string() << ',' << e.x << ',' << e.value << ','
           << e.err << ',' << to_string(e.sign) << '\n';
    return os.str();
}

} // namespace heunlock
