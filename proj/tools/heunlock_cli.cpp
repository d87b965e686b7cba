// heunlock command-line interface.
//
// Exit codes: 0 ok, 1 invariant violation, 2 usage or domain error,
// 3 convergence failure.

#include "heunlock/errors.hpp"
#include "heunlock/heunrec.hpp"
#include "heunlock/portrait.hpp"
#include "heunlock/precision.hpp"
#include "heunlock/specfun.hpp"
#include "heunlock/torusflow.hpp"
#include "heunlock/verify.hpp"
#include "heunlock/xiprod.hpp"
#include "heunlock/youngdet.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace heunlock;

namespace {

constexpr int kOk = 0;
constexpr int kInvariant = 1;
constexpr int kUsage = 2;
constexpr int kConvergence = 3;

struct RunConfig {
    std::optional<unsigned> precision_bits;
    double tol = 1e-15;
    int periods = 0; // 0: command default
    std::string grid;
    std::string out;
    unsigned long seed = 0;
    bool json = false;

    Precision precision() const
    {
        if (precision_bits)
            return Precision::with_bits(*precision_bits, tol);
        return Precision::from_environment(tol);
    }
};

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void write_output(const RunConfig& cfg, const std::string& body)
{
    if (cfg.out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f)
        throw DomainError("cannot open output file " + cfg.out);
    f << body;
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size())
            throw DomainError("bad number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw DomainError("empty list '" + s + "'");
    return out;
}

std::pair<double, double> parse_range(const std::string& s)
{
    const auto v = parse_list(s);
    if (v.size() != 2 || !(v[1] > v[0]))
        throw DomainError("range must be 'lo,hi' with lo < hi");
    return {v[0], v[1]};
}

std::pair<int, int> parse_grid(const std::string& s, int def)
{
    if (s.empty())
        return {def, def};
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) {
            const int n = std::stoi(s);
            return {n, n};
        }
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        throw DomainError("grid must be N or NBxNA");
    }
}

// ---- bessel -----------------------------------------------------------------

struct BesselArgs {
    int j = 0;
    double x = 0.0;
};

int cmd_bessel(const BesselArgs& a, const RunConfig& cfg)
{
    const auto r = bessel_i_bounded(a.j, a.x, cfg.precision());
    if (cfg.json) {
        nlohmann::ordered_json j{{"j", a.j}, {"x", a.x}, {"value", r.value}, {"err", r.err}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << num(r.value) << ' ' << num(r.err) << '\n';
    }
    return kOk;
}

// ---- scan-positivity --------------------------------------------------------

struct ScanArgs {
    int l = 2;
    int radius = 4;
    std::string xs = "0.1,1,5";
    unsigned ceiling = kDefaultCeilingBits;
};

int cmd_scan(const ScanArgs& a, const RunConfig& cfg)
{
    const auto xs = parse_list(a.xs);
    const auto prec = cfg.precision();
    const auto r = positivity_scan(a.l, a.radius, xs, prec, a.ceiling);
    std::ostringstream body;
    body << "# l=" << a.l << " radius=" << a.radius << " xs=" << a.xs << " seed=" << cfg.seed
         << " precision=" << prec.describe() << '\n'
         << r.to_csv();
    write_output(cfg, body.str());
    std::cerr << r.entries.size() << " triples, " << r.nonpositive << " non-positive, " << r.unresolved
              << " unresolved, min value " << num(r.min_value) << '\n';
    if (r.nonpositive > 0)
        return kInvariant;
    if (r.unresolved > 0)
        return kConvergence;
    return kOk;
}

// ---- xi ---------------------------------------------------------------------

struct XiArgs {
    int l = 0;
    std::optional<double> lambda, mu, omega, A;
};

int cmd_xi(const XiArgs& a, const RunConfig& cfg)
{
    HeunParams p;
    if (a.lambda && a.mu && !a.omega && !a.A)
        p = HeunParams(a.l, *a.lambda, *a.mu);
    else if (a.omega && a.A && !a.lambda && !a.mu)
        p = josephson_heun_params(a.l, *a.omega, *a.A);
    else
        throw DomainError("xi needs either --lambda and --mu, or --omega and --A");
    const double tol = cfg.tol < 1e-12 ? 1e-12 : cfg.tol;
    const auto x = xi_l(p, tol);
    if (cfg.json) {
        nlohmann::ordered_json j{{"l", p.l},         {"lambda", p.lambda}, {"mu", p.mu},
                                 {"value", x.value}, {"err", x.err},       {"J", x.J}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << num(x.value) << ' ' << num(x.err) << '\n';
    }
    return kOk;
}

// ---- adjacencies --------------------------------------------------------------

struct AdjArgs {
    int l = 0;
    double omega = 0.7;
    double A_max = 10.0;
    double root_tol = 1e-11;
};

int cmd_adjacencies(const AdjArgs& a, const RunConfig& cfg)
{
    const auto roots = xi_roots_on_line(a.l, a.omega, a.A_max, a.root_tol);
    AdjacencyOptions opt;
    if (cfg.periods > 0)
        opt.periods = cfg.periods;
    std::vector<double> defects;
    std::vector<AdjacencyReport> reports;
    bool ok = true;
    for (const auto& r : roots) {
        const auto rep = adjacency_verify(a.l, a.omega, r.A, opt);
        defects.push_back(rep.entire_solution_defect);
        ok = ok && rep.parity_constraint && rep.magnitude_constraint &&
             rep.monodromy_distance < 1e-6 && !r.suspected;
        reports.push_back(rep);
    }
    if (cfg.json) {
        nlohmann::ordered_json j;
        j["l"] = a.l;
        j["omega"] = a.omega;
        j["A_max"] = a.A_max;
        j["seed"] = cfg.seed;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& rep : reports)
            arr.push_back(nlohmann::ordered_json::parse(rep.to_json()));
        j["reports"] = arr;
        write_output(cfg, j.dump(2) + "\n");
    } else {
        std::ostringstream body;
        body << "# l=" << a.l << " omega=" << num(a.omega) << " A_max=" << num(a.A_max)
             << " seed=" << cfg.seed << '\n'
             << roots_csv(a.l, a.omega, roots, defects);
        write_output(cfg, body.str());
    }
    return ok ? kOk : kInvariant;
}

// ---- portrait -----------------------------------------------------------------

struct PortraitArgs {
    double omega = 0.7;
    std::string B_range = "-4,4";
    std::string A_range = "0,10";
    std::string svg;
    int width = 600;
    int height = 750;
    bool direct = false;
    bool overlay = true;
};

int cmd_portrait(const PortraitArgs& a, const RunConfig& cfg)
{
    PortraitSpec s;
    s.omega = a.omega;
    std::tie(s.B_min, s.B_max) = parse_range(a.B_range);
    std::tie(s.A_min, s.A_max) = parse_range(a.A_range);
    std::tie(s.nB, s.nA) = parse_grid(cfg.grid, 200);
    if (cfg.periods > 0)
        s.periods = cfg.periods;
    s.fast = !a.direct;
    s.seed = cfg.seed;
    const auto p = portrait(s);
    write_output(cfg, p.to_csv());
    if (!a.svg.empty()) {
        std::vector<std::pair<double, double>> adj;
        if (a.overlay && s.A_max > 0.0) {
            const double bmax = std::max(std::abs(s.B_min), std::abs(s.B_max));
            for (int l = 0; l * s.omega <= bmax + 1e-12; ++l) {
                for (const auto& r : xi_roots_on_line(l, s.omega, s.A_max, 1e-9)) {
                    adj.emplace_back(l * s.omega, r.A);
                    if (l > 0)
                        adj.emplace_back(-l * s.omega, r.A);
                }
            }
        }
        std::ofstream f(a.svg);
        if (!f)
            throw DomainError("cannot open svg file " + a.svg);
        f << p.to_svg(a.width, a.height, adj);
    }
    return kOk;
}

// ---- verify -------------------------------------------------------------------

int cmd_verify(const std::string& suite, const RunConfig& cfg)
{
    std::vector<std::string> names;
    if (suite == "all")
        names = suite_names();
    else
        names = {suite};
    bool ok = true;
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const auto& n : names) {
        const auto r = run_suite(n);
        ok = ok && r.pass();
        if (cfg.json) {
            all.push_back(nlohmann::ordered_json::parse(r.to_json()));
        } else {
            for (const auto& c : r.checks)
                std::cout << r.suite << ' ' << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << ' '
                          << c.detail << '\n';
            std::cout << r.suite << ' ' << (r.pass() ? "PASS" : "FAIL") << '\n';
        }
    }
    if (cfg.json)
        std::cout << all.dump(2) << '\n';
    return ok ? kOk : kInvariant;
}

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--precision-bits", cfg.precision_bits,
                    "MPFR mantissa bits (53 = hardware; default from HEUNLOCK_PRECISION_BITS)");
    sub->add_option("--tol", cfg.tol, "absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--periods", cfg.periods, "2 pi periods for rotation numbers");
    sub->add_option("--grid", cfg.grid, "grid size N or NBxNA");
    sub->add_option("--out", cfg.out, "write the main output to this file instead of stdout");
    sub->add_option("--seed", cfg.seed, "seed recorded in output headers");
    sub->add_flag("--json", cfg.json, "machine-readable JSON output");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"heunlock: Bessel determinants, double confluent Heun equations and RSJ phase-lock areas"};
    app.require_subcommand(1);
    RunConfig cfg;

    BesselArgs ba;
    auto* bessel = app.add_subcommand("bessel", "modified Bessel function I_j(x) with error bound");
    bessel->add_option("-j", ba.j, "order")->required();
    bessel->add_option("-x", ba.x, "argument x >= 0")->required();
    add_common(bessel, cfg);

    ScanArgs sa;
    auto* scan = app.add_subcommand("scan-positivity", "certified signs of f_{k,n}(x) over a window");
    scan->add_option("-l,--l", sa.l, "diagram length")->check(CLI::Range(1, 6));
    scan->add_option("-r,--radius", sa.radius, "component bound")->check(CLI::Range(1, 12));
    scan->add_option("--xs", sa.xs, "comma-separated positive x values");
    scan->add_option("--ceiling-bits", sa.ceiling, "precision escalation ceiling");
    add_common(scan, cfg);

    XiArgs xa;
    auto* xi = app.add_subcommand("xi", "xi_l(lambda, mu) with error estimate");
    xi->add_option("-l,--l", xa.l, "l >= 0")->required();
    xi->add_option("--lambda", xa.lambda);
    xi->add_option("--mu", xa.mu);
    xi->add_option("--omega", xa.omega);
    xi->add_option("-A,--A", xa.A);
    add_common(xi, cfg);

    AdjArgs aa;
    auto* adj = app.add_subcommand("adjacencies", "roots of xi_l on B = l omega with verification");
    adj->add_option("-l,--l", aa.l, "l >= 0")->required();
    adj->add_option("--omega", aa.omega);
    adj->add_option("--A-max", aa.A_max);
    adj->add_option("--root-tol", aa.root_tol, "bisection tolerance in A");
    add_common(adj, cfg);

    PortraitArgs pa;
    auto* por = app.add_subcommand("portrait", "rotation-number portrait: CSV to stdout, SVG to --svg");
    por->add_option("--omega", pa.omega);
    por->add_option("--B-range", pa.B_range, "lo,hi");
    por->add_option("--A-range", pa.A_range, "lo,hi");
    por->add_option("--svg", pa.svg, "SVG output path");
    por->add_option("--width", pa.width);
    por->add_option("--height", pa.height);
    por->add_flag("--direct", pa.direct, "integrate every period directly (slow)");
    por->add_flag("!--no-overlay", pa.overlay, "omit adjacency markers");
    add_common(por, cfg);

    std::string suite;
    auto* ver = app.add_subcommand("verify", "run an invariant suite");
    ver->add_option("suite", suite, "bessel | positivity-l2 | heun-exclusion | all")->required();
    add_common(ver, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*bessel)
            return cmd_bessel(ba, cfg);
        if (*scan)
            return cmd_scan(sa, cfg);
        if (*xi)
            return cmd_xi(xa, cfg);
        if (*adj)
            return cmd_adjacencies(aa, cfg);
        if (*por)
            return cmd_portrait(pa, cfg);
        if (*ver)
            return cmd_verify(suite, cfg);
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << '\n';
        return kConvergence;
    } catch (const ContradictionError& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const ConsistencyError& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
