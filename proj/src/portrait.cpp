#include "heunlock/portrait.hpp"

#include "heunlock/errors.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace heunlock {

namespace {

constexpr int kMaxGrid = 2000;

void validate(const PortraitSpec& s)
{
    if (!(s.omega > 0.0))
        throw DomainError("portrait needs omega > 0");
    if (s.nB < 2 || s.nA < 2 || s.nB > kMaxGrid || s.nA > kMaxGrid)
        throw DomainError("portrait grid sizes must be in [2, 2000]");
    if (!(s.B_max > s.B_min) || !(s.A_max > s.A_min))
        throw DomainError("portrait ranges must be nonempty");
    if (s.periods < 50)
        throw DomainError("portrait needs at least 50 periods");
}

PortraitCell compute_cell(const PortraitSpec& s, int iB, int iA)
{
    PortraitCell c;
    c.B = grid_coordinate(s.B_min, s.B_max, iB, s.nB);
    c.A = grid_coordinate(s.A_min, s.A_max, iA, s.nA);
    try {
        const JosephsonParams p(s.omega, c.B, c.A);
        const auto r = s.fast ? rotation_number_fast(p, s.periods, s.tol)
                              : rotation_number(p, s.periods, std::max(s.tol, 1e-11));
        c.rho = r.rho;
        c.conf = r.conf;
        c.ok = std::isfinite(r.rho);
    } catch (const std::exception&) {
        c.rho = std::numeric_limits<double>::quiet_NaN();
        c.conf = std::numeric_limits<double>::quiet_NaN();
        c.ok = false;
    }
    return c;
}

Portrait make_empty(const PortraitSpec& s)
{
    validate(s);
    Portrait p;
    p.spec = s;
    p.cells.resize(static_cast<std::size_t>(s.nA) * static_cast<std::size_t>(s.nB));
    return p;
}

} // namespace

double grid_coordinate(double lo, double hi, int i, int n)
{
    const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    return c + hw * static_cast<double>(2 * i - (n - 1)) / static_cast<double>(n - 1);
}

const PortraitCell& Portrait::at(int iB, int iA) const
{
    return cells.at(static_cast<std::size_t>(iA) * static_cast<std::size_t>(spec.nB) + static_cast<std::size_t>(iB));
}

double Portrait::symmetry_defect() const
{
    if (spec.B_min != -spec.B_max)
        throw DomainError("symmetry check needs a B range symmetric about 0");
    double worst = 0.0;
    for (int iA = 0; iA < spec.nA; ++iA)
        for (int iB = 0; iB < spec.nB; ++iB) {
            const auto& a = at(iB, iA);
            const auto& b = at(spec.nB - 1 - iB, iA);
            if (!a.ok || !b.ok)
                return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::abs(a.rho + b.rho));
        }
    return worst;
}

std::string Portrait::to_csv() const
{
    std::ostringstream os;
    os << std::setprecision(12);
    os << "# omega=" << spec.omega << " seed=" << spec.seed << " periods=" << spec.periods
       << " grid=" << spec.nB << "x" << spec.nA << " method=" << (spec.fast ? "period-map" : "direct")
       << '\n';
    os << "B,A,rho,conf\n";
    for (const auto& c : cells) {
        os << c.B << ',' << c.A << ',';
        if (c.ok)
            os << c.rho << ',' << c.conf;
        else
            os << "nan,nan";
        os << '\n';
    }
    return os.str();
}

std::string Portrait::to_svg(int width, int height,
                             const std::vector<std::pair<double, double>>& adjacencies) const
{
    if (width < 10 || height < 10)
        throw DomainError("svg size too small");
    static const std::array<const char*, 8> palette = {"#1f4e9c", "#d9534f", "#2e8b57", "#f0ad4e",
                                                       "#7b4fa0", "#17a2b8", "#a0522d", "#c71585"};
    const char* neutral = "#e6e6e6";
    const char* missing = "#ffffff";
    const double cw = static_cast<double>(width) / spec.nB;
    const double ch = static_cast<double>(height) / spec.nA;
    auto x_of = [&](double B) { return (B - spec.B_min) / (spec.B_max - spec.B_min) * width; };
    auto y_of = [&](double A) { return height - (A - spec.A_min) / (spec.A_max - spec.A_min) * height; };

    std::ostringstream os;
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" shape-rendering=\"crispEdges\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"" << missing << "\"/>\n";
    for (int iA = 0; iA < spec.nA; ++iA)
        for (int iB = 0; iB < spec.nB; ++iB) {
            const auto& c = at(iB, iA);
            const char* fill = missing;
            if (c.ok) {
                const double r = std::round(c.rho);
                if (std::abs(c.rho - r) > 0.05) {
                    fill = neutral;
                } else {
                    const long k = static_cast<long>(r);
                    const long idx = ((k % 8) + 8) % 8;
                    fill = palette[static_cast<std::size_t>(idx)];
                }
            }
            os << "<rect x=\"" << iB * cw << "\" y=\"" << height - (iA + 1) * ch << "\" width=\""
               << cw << "\" height=\"" << ch << "\" fill=\"" << fill << "\"/>\n";
        }
    for (const auto& [B, A] : adjacencies) {
        if (B < spec.B_min || B > spec.B_max || A < spec.A_min || A > spec.A_max)
            continue;
        os << "<circle cx=\"" << x_of(B) << "\" cy=\"" << y_of(A)
           << "\" r=\"3\" fill=\"#000000\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

Portrait portrait(const PortraitSpec& spec)
{
    Portrait p = make_empty(spec);
    const long n = static_cast<long>(p.cells.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long idx = 0; idx < n; ++idx) {
        const int iA = static_cast<int>(idx / spec.nB), iB = static_cast<int>(idx % spec.nB);
        p.cells[static_cast<std::size_t>(idx)] = compute_cell(spec, iB, iA);
    }
    return p;
}

Portrait portrait_serial(const PortraitSpec& spec)
{
    Portrait p = make_empty(spec);
    for (int iA = 0; iA < spec.nA; ++iA)
        for (int iB = 0; iB < spec.nB; ++iB)
            p.cells[static_cast<std::size_t>(iA) * static_cast<std::size_t>(spec.nB) + static_cast<std::size_t>(iB)] =
                compute_cell(spec, iB, iA);
    return p;
}

} // namespace heunlock
